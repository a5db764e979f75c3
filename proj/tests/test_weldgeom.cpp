#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "indmath/weldgeom.hpp"

using namespace indmath;
using weld::CurvePoint;
using weld::PipeJoint;
using weld::WeldCurve;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent implicit-surface residuals, written from the cylinder
// equations rather than reusing the library helper.
double pipe1_residual(const PipeJoint& j, const CurvePoint& p) {
    return std::abs(p.x * p.x + p.y * p.y - j.r1 * j.r1);
}

double pipe2_residual(const PipeJoint& j, const CurvePoint& p) {
    const double ax = -std::sin(j.phi), az = std::cos(j.phi);
    const double dot = p.x * ax + p.z * az;
    const double rx = p.x - dot * ax;
    const double ry = p.y;
    const double rz = p.z - dot * az;
    return std::abs(rx * rx + ry * ry + rz * rz - j.r2 * j.r2);
}

// RMS distance to the least-squares plane through the points.
double plane_fit_residual(const WeldCurve& curve) {
    const size_t n = curve.points.size();
    Eigen::MatrixXd pts(n, 3);
    for (size_t i = 0; i < n; ++i)
        pts.row(i) << curve.points[i].x, curve.points[i].y, curve.points[i].z;
    const Eigen::RowVector3d centroid = pts.colwise().mean();
    pts.rowwise() -= centroid;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts, Eigen::ComputeThinV);
    const Eigen::Vector3d normal = svd.matrixV().col(2);
    return std::sqrt((pts * normal).squaredNorm() / n);
}

double max_gap(const WeldCurve& curve) {
    double worst = 0.0;
    const size_t n = curve.points.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[(i + 1) % n];
        worst = std::max(worst, std::hypot(b.x - a.x, b.y - a.y, b.z - a.z));
    }
    return worst;
}

double perimeter(const WeldCurve& curve) {
    double len = 0.0;
    const size_t n = curve.points.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[(i + 1) % n];
        len += std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
    }
    return len;
}

// Brute-force clearance oracle: same torch surface region as the model
// (axis stations within [probe/16, probe]) but sampled much more densely.
bool oracle_penetrates(const PipeJoint& j, const CurvePoint& cp, double rt,
                       double probe) {
    const Eigen::Vector3d axis(-std::sin(j.phi), 0.0, std::cos(j.phi));
    const Eigen::Vector3d p(cp.x, cp.y, cp.z);
    const Eigen::Vector3d n1 = Eigen::Vector3d(p.x(), p.y(), 0.0) / j.r1;
    const Eigen::Vector3d radial = p - p.dot(axis) * axis;
    const Eigen::Vector3d n2 = radial.normalized();
    Eigen::Vector3d b = n1 + n2;
    if (b.norm() < 1e-12) return false;
    b.normalize();
    const Eigen::Vector3d seed =
        std::abs(b.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d e1 = b.cross(seed).normalized();
    const Eigen::Vector3d e2 = b.cross(e1);
    const double t_lo = probe / 16.0;
    for (int ia = 0; ia <= 64; ++ia) {
        const double t = t_lo + (probe - t_lo) * ia / 64.0;
        const Eigen::Vector3d c0 = p + t * b;
        for (int ic = 0; ic < 96; ++ic) {
            const double psi = 2.0 * kPi * ic / 96.0;
            const Eigen::Vector3d q =
                c0 + rt * (std::cos(psi) * e1 + std::sin(psi) * e2);
            const double d1 = std::hypot(q.x(), q.y()) - j.r1;
            const double d2 = (q - q.dot(axis) * axis).norm() - j.r2;
            if (d1 < 0.0 || d2 < 0.0) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("intersection point matches the closed form at simple angles") {
    const PipeJoint equal{1.0, 1.0, kPi / 2};
    const auto tangent = weld::intersection_point(equal, kPi / 2, +1);
    CHECK(tangent.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tangent.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tangent.z == doctest::Approx(0.0).epsilon(1e-12));
    // both branches coincide at the tangency point
    const auto other = weld::intersection_point(equal, kPi / 2, -1);
    CHECK(other.x == doctest::Approx(tangent.x).epsilon(1e-12));
    CHECK(other.z == doctest::Approx(tangent.z).epsilon(1e-12));

    const auto top = weld::intersection_point(equal, 0.0, +1);
    CHECK(top.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(top.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top.z == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("intersection point at r1=1 r2=0.9 phi=45deg theta2=0") {
    const PipeJoint joint{1.0, 0.9, kPi / 4};
    const auto p = weld::intersection_point(joint, 0.0, +1);
    CHECK(p.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-14));
    // 0.9*sqrt(2) - 1 evaluated at high precision
    CHECK(p.z == doctest::Approx(0.27279220613578553).epsilon(1e-13));
    CHECK(pipe1_residual(joint, p) < 1e-12);
    CHECK(pipe2_residual(joint, p) < 1e-12);
}

TEST_CASE("invalid joints are rejected") {
    CHECK_THROWS_AS(weld::intersection_point({1.0, 1.1, kPi / 4}, 0.0, +1),
                    InvalidJoint);
    CHECK_THROWS_AS(weld::intersection_point({1.0, 0.5, 0.0}, 0.0, +1),
                    DegenerateAngle);
    CHECK_THROWS_AS(weld::intersection_point({-1.0, 0.5, kPi / 4}, 0.0, +1),
                    InvalidJoint);
    CHECK_THROWS_AS(weld::full_seam({1.0, 0.5, kPi / 4}, 3), InvalidJoint);
}

TEST_CASE("full seam stays on both surfaces with bounded gaps") {
    const PipeJoint joint{1.0, 0.9, kPi / 4};
    const auto [a, b] = weld::full_seam(joint, 360);
    REQUIRE(a.points.size() == 360);
    REQUIRE(b.points.size() == 360);
    const double gap_bound = 2.0 * 2.0 * kPi * 1.0 / 360.0;
    for (const auto* curve : {&a, &b}) {
        for (const auto& p : curve->points) {
            CHECK(pipe1_residual(joint, p) <= 1e-9 * joint.r1 * joint.r1);
            CHECK(pipe2_residual(joint, p) <= 1e-9 * joint.r2 * joint.r2);
        }
        CHECK(max_gap(*curve) < gap_bound);
    }
}

TEST_CASE("equal radii give two planar stitched curves") {
    const PipeJoint joint{1.0, 1.0, kPi / 2};
    const auto [a, b] = weld::full_seam(joint, 360);
    CHECK(plane_fit_residual(a) < 1e-9);
    CHECK(plane_fit_residual(b) < 1e-9);
    // stitched curves stay continuous through the tangency
    CHECK(max_gap(a) < 4.0 * perimeter(a) / 360.0);
    CHECK(max_gap(b) < 4.0 * perimeter(b) / 360.0);
}

TEST_CASE("curve cardinality follows the sample count") {
    const auto [a, b] = weld::full_seam({1.0, 0.5, kPi / 6}, 4);
    CHECK(a.points.size() == 4);
    CHECK(b.points.size() == 4);
}

TEST_CASE("seam is mirror symmetric in theta2") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(0.05, kPi / 2);
    std::uniform_real_distribution<double> t2(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const PipeJoint joint{1.3, 0.8, angle(rng)};
        const double theta2 = t2(rng);
        const auto p = weld::intersection_point(joint, theta2, +1);
        const auto m = weld::intersection_point(joint, -theta2, +1);
        CHECK(m.x == doctest::Approx(p.x).epsilon(1e-12));
        CHECK(m.y == doctest::Approx(-p.y).epsilon(1e-12));
        CHECK(m.z == doctest::Approx(p.z).epsilon(1e-12));
    }
}

TEST_CASE("stitched curves have no gap beyond the sampling bound") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double r1 = 0.5 + 1.5 * u(rng);
        const double r2 = r1 * (0.1 + 0.9 * u(rng));
        const double phi = (5.0 + 85.0 * u(rng)) * kPi / 180.0;
        const auto [a, b] = weld::full_seam({r1, r2, phi}, 360);
        for (const auto* curve : {&a, &b})
            CHECK(max_gap(*curve) <= 4.0 * perimeter(*curve) / 360.0);
    }
}

TEST_CASE("zero-radius torch never violates clearance") {
    const PipeJoint joint{1.0, 0.9, kPi / 4};
    const auto [a, b] = weld::full_seam(joint, 90);
    CHECK(weld::clearance_check(joint, a, 0.0, 0.5).empty());
    CHECK(weld::clearance_check(joint, b, 0.0, 0.5).empty());
}

TEST_CASE("small joint angle pinches the torch, right angle does not") {
    {
        const PipeJoint joint{1.0, 0.9, 10.0 * kPi / 180.0};
        const auto [a, b] = weld::full_seam(joint, 180);
        const auto va = weld::clearance_check(joint, a, 0.05, 0.5);
        const auto vb = weld::clearance_check(joint, b, 0.05, 0.5);
        CHECK(va.size() + vb.size() > 0);
        for (const auto& v : va) CHECK(v.min_distance < 0.0);
        // oracle agrees that some sampled point penetrates
        bool oracle_any = false;
        for (const auto& p : a.points)
            oracle_any = oracle_any || oracle_penetrates(joint, p, 0.05, 0.5);
        for (const auto& p : b.points)
            oracle_any = oracle_any || oracle_penetrates(joint, p, 0.05, 0.5);
        CHECK(oracle_any);
    }
    {
        const PipeJoint joint{1.0, 0.5, kPi / 2};
        const auto [a, b] = weld::full_seam(joint, 180);
        CHECK(weld::clearance_check(joint, a, 0.01, 0.5).empty());
        CHECK(weld::clearance_check(joint, b, 0.01, 0.5).empty());
        for (const auto& p : a.points)
            CHECK_FALSE(oracle_penetrates(joint, p, 0.01, 0.5));
    }
}
