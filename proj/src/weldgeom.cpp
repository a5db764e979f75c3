#include "indmath/weldgeom.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace indmath::weld {

namespace {

using Eigen::Vector3d;

Vector3d branch_axis(const PipeJoint& joint) {
    return {-std::sin(joint.phi), 0.0, std::cos(joint.phi)};
}

Vector3d position(const CurvePoint& p) { return {p.x, p.y, p.z}; }

}  // namespace

void validate(const PipeJoint& joint) {
    if (!(joint.r1 > 0.0) || !(joint.r2 > 0.0))
        throw InvalidJoint("pipe radii must be positive");
    if (joint.r2 > joint.r1)
        throw InvalidJoint("branch radius r2 must not exceed main radius r1");
    if (!(joint.phi > 0.0))
        throw DegenerateAngle("joint angle phi must be positive (parallel axes)");
    if (joint.phi > std::numbers::pi / 2 + 1e-15)
        throw InvalidJoint("joint angle phi must not exceed pi/2");
}

CurvePoint intersection_point(const PipeJoint& joint, double theta2,
                              int branch) {
    validate(joint);
    const double c2 = std::cos(theta2);
    const double disc =
        joint.r1 * joint.r1 - joint.r2 * joint.r2 + joint.r2 * joint.r2 * c2 * c2;
    // disc >= r1^2 - r2^2 >= 0 for valid joints; clamp rounding noise.
    const double root = std::sqrt(std::max(disc, 0.0));
    const double sign = branch >= 0 ? 1.0 : -1.0;
    CurvePoint p;
    p.x = sign * root;
    p.y = joint.r2 * std::sin(theta2);
    p.z = (joint.r2 * c2 - sign * std::cos(joint.phi) * root) / std::sin(joint.phi);
    p.theta2 = theta2;
    p.branch = branch >= 0 ? +1 : -1;
    return p;
}

std::pair<WeldCurve, WeldCurve> full_seam(const PipeJoint& joint,
                                          int n_samples) {
    validate(joint);
    if (n_samples < 4)
        throw InvalidJoint("full_seam requires at least 4 samples");

    const bool equal_radii = joint.r2 == joint.r1;
    WeldCurve a, b;
    a.points.reserve(n_samples);
    b.points.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double theta2 = 2.0 * std::numbers::pi * k / n_samples;
        // At r2 == r1 the root equals r1*|cos theta2| and the fixed-branch
        // curves fold back at cos theta2 = 0; flipping the sign with
        // cos theta2 keeps x = r1*cos(theta2) smooth along each curve.
        int sa = +1;
        if (equal_radii && std::cos(theta2) < 0.0) sa = -1;
        a.points.push_back(intersection_point(joint, theta2, sa));
        b.points.push_back(intersection_point(joint, theta2, -sa));
    }
    return {std::move(a), std::move(b)};
}

std::array<double, 2> surface_residuals(const PipeJoint& joint,
                                        const CurvePoint& p) {
    const Vector3d pos = position(p);
    const double res1 =
        std::abs(pos.x() * pos.x() + pos.y() * pos.y() - joint.r1 * joint.r1);
    const Vector3d axis = branch_axis(joint);
    const Vector3d radial = pos - pos.dot(axis) * axis;
    const double res2 = std::abs(radial.squaredNorm() - joint.r2 * joint.r2);
    return {res1, res2};
}

std::vector<ClearanceViolation> clearance_check(const PipeJoint& joint,
                                                const WeldCurve& curve,
                                                double torch_radius,
                                                double probe_length,
                                                const TorchSampling& sampling) {
    validate(joint);
    if (torch_radius < 0.0)
        throw InvalidJoint("torch radius must be nonnegative");
    if (!(probe_length > 0.0))
        throw InvalidJoint("probe length must be positive");

    const Vector3d axis = branch_axis(joint);
    std::vector<ClearanceViolation> violations;
    for (const CurvePoint& cp : curve.points) {
        const Vector3d p = position(cp);
        const Vector3d n1 = Vector3d(p.x(), p.y(), 0.0) / joint.r1;
        const Vector3d radial = p - p.dot(axis) * axis;
        const Vector3d n2 = radial / radial.norm();
        Vector3d bisector = n1 + n2;
        const double bn = bisector.norm();
        if (bn < 1e-12) continue;  // opposed normals, no outward direction
        bisector /= bn;

        // Orthonormal frame spanning the torch cross-section.
        Vector3d seed = std::abs(bisector.x()) < 0.9 ? Vector3d::UnitX()
                                                     : Vector3d::UnitY();
        const Vector3d e1 = bisector.cross(seed).normalized();
        const Vector3d e2 = bisector.cross(e1);

        double dmin = std::numeric_limits<double>::infinity();
        for (int ia = 1; ia <= sampling.axis_samples; ++ia) {
            const Vector3d center =
                p + (probe_length * ia / sampling.axis_samples) * bisector;
            for (int ic = 0; ic < sampling.circ_samples; ++ic) {
                const double psi =
                    2.0 * std::numbers::pi * ic / sampling.circ_samples;
                const Vector3d q = center + torch_radius * (std::cos(psi) * e1 +
                                                            std::sin(psi) * e2);
                const double d1 = std::hypot(q.x(), q.y()) - joint.r1;
                const double d2 =
                    (q - q.dot(axis) * axis).norm() - joint.r2;
                dmin = std::min({dmin, d1, d2});
            }
        }
        if (dmin < 0.0) violations.push_back({cp.theta2, dmin});
    }
    return violations;
}

}  // namespace indmath::weld
