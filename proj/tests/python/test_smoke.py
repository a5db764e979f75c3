import math

import numpy as np
import pytest

import indmath


def test_weld_seam_points():
    joint = indmath.PipeJoint(1.0, 0.9, math.pi / 4)
    p = indmath.intersection_point(joint, 0.0, +1)
    assert p.x == pytest.approx(1.0, abs=1e-14)
    assert p.y == pytest.approx(0.0, abs=1e-14)
    assert p.z == pytest.approx(0.27279220613578553, rel=1e-12)

    a, b = indmath.full_seam(joint, 360)
    assert a.shape == (360, 5)
    assert b.shape == (360, 5)
    # every sample on the main pipe surface
    r = a[:, 2] ** 2 + a[:, 3] ** 2
    assert np.max(np.abs(r - 1.0)) < 1e-9


def test_weld_invalid_joint_raises():
    with pytest.raises(indmath.IndmathError):
        indmath.intersection_point(indmath.PipeJoint(1.0, 2.0, 0.5), 0.0, +1)


def test_radon_mass_conservation():
    rng = np.random.default_rng(1)
    img = rng.uniform(0.0, 255.0, size=(32, 32))
    sino, thetas, rhos = indmath.radon_transform(img, n_theta=45, n_rho=47)
    assert sino.shape == (45, 47)
    assert len(thetas) == 45 and len(rhos) == 47
    mass = img.sum()
    assert np.allclose(sino.sum(axis=1), mass, rtol=1e-10)


def test_tripwire_detection_roundtrip():
    img = np.full((160, 160), 100.0)
    ys, xs = np.mgrid[0:160, 0:160]
    d = np.abs((xs - 79.5) * math.cos(1.2) - (ys - 79.5) * math.sin(1.2) - 10.0)
    img[d <= 1.0] = 220.0

    params = indmath.DetectionParams()
    params.n_theta = 90
    params.n_rho = 151
    params.nms_window_rho = 7
    features, overlay = indmath.detect_tripwires(img, params)
    assert len(features) == 1
    assert features[0].theta == pytest.approx(1.2, abs=math.pi / 90)
    assert features[0].rho == pytest.approx(10.0, abs=2.0)
    assert overlay.shape == img.shape


def test_plume_concentration_value():
    spec = indmath.DispersionSpec(
        indmath.SigmaModel.constant(10.0), indmath.SigmaModel.constant(10.0)
    )
    src = indmath.Source(x=0.0, y=0.0, h=20.0, q=1.0)
    c = indmath.concentration(src, 5.0, spec, 100.0, 0.0, 0.0)
    assert c == pytest.approx(8.6157117207394519e-05, rel=1e-9)
    # crosswind symmetry
    assert indmath.concentration(src, 5.0, spec, 100.0, 30.0, 0.0) == \
        indmath.concentration(src, 5.0, spec, 100.0, -30.0, 0.0)


def test_inversion_recovers_rates():
    spec = indmath.DispersionSpec(
        indmath.SigmaModel.power_law(0.22, 0.85),
        indmath.SigmaModel.power_law(0.12, 0.85),
    )
    dust = indmath.Contaminant("zinc", 0.02)
    sources = [
        indmath.Source(0, 0, 12, 4.2, "s1"),
        indmath.Source(700, 100, 8, 1.3, "s2"),
        indmath.Source(-500, 400, 15, 2.8, "s3"),
        indmath.Source(300, -600, 10, 0.7, "s4"),
    ]
    receptors = [
        indmath.Receptor(250, 80), indmath.Receptor(-180, -160),
        indmath.Receptor(930, 300), indmath.Receptor(560, -120),
        indmath.Receptor(-710, 620), indmath.Receptor(-350, 240),
        indmath.Receptor(520, -780), indmath.Receptor(120, -420),
        indmath.Receptor(150, -80),
    ]
    wind = [
        indmath.WindInterval(1800.0, u, 10.0 * k + 5.0)
        for k in range(36) for u in (3.0, 6.0)
    ]
    G = indmath.build_design_matrix(sources, receptors, wind, spec, dust)
    qstar = np.array([4.2, 1.3, 2.8, 0.7])
    d = G.values @ qstar

    est = indmath.solve_nnls(G, d)
    assert np.allclose(est.q, qstar, rtol=1e-6)
    assert est.residual_norm == pytest.approx(0.0, abs=1e-9)

    clamped = indmath.solve_nnls(indmath.DesignMatrix(np.eye(1)), np.array([-1.0]))
    assert clamped.q[0] == 0.0


def test_fvm_small_grid_conserves_mass():
    grid = indmath.Grid3D()
    grid.nx = grid.ny = grid.nz = 12
    grid.x_min, grid.x_max = 0.0, 400.0
    grid.y_min, grid.y_max = -100.0, 100.0
    grid.z_min, grid.z_max = 0.0, 160.0
    params = indmath.FvmParams()
    params.source_x, params.source_y, params.source_z = 25.0, 0.0, 40.0

    field, result = indmath.fvm_steady_solve(grid, params)
    assert result.converged
    assert field.shape == (12, 12, 12)
    assert field.min() >= 0.0
    out = indmath.boundary_outflux(grid, params, field)
    assert out == pytest.approx(params.q, rel=1e-6)
