#pragma once

#include <array>
#include <utility>
#include <vector>

#include "indmath/errors.hpp"

namespace indmath::weld {

// Two cylinders meeting at a joint: the main pipe (radius r1, axis along z)
// and a branch pipe (radius r2) whose axis passes through the origin in the
// x-z plane, tilted by the joint angle phi from the main axis.
// Valid joints have 0 < r2 <= r1 and 0 < phi <= pi/2.
struct PipeJoint {
    double r1;
    double r2;
    double phi;
};

void validate(const PipeJoint& joint);

// One sample of the seam. theta2 parametrizes the branch pipe
// circumference; branch is the sign choice of the square root (+1 or -1).
struct CurvePoint {
    double x;
    double y;
    double z;
    double theta2;
    int branch;
};

struct WeldCurve {
    std::vector<CurvePoint> points;
    bool closed = true;
};

struct ClearanceViolation {
    double theta2;
    double min_distance;
};

// Sampling density of the torch surface used by clearance_check. The base
// ring (t = 0) sits on the seam itself and is not sampled.
struct TorchSampling {
    int axis_samples = 16;
    int circ_samples = 24;
};

// Closed-form seam point for one branch at one theta2.
CurvePoint intersection_point(const PipeJoint& joint, double theta2,
                              int branch);

// Samples both seam curves at n_samples uniform theta2 values on [0, 2*pi).
// For r2 < r1 each curve keeps a fixed branch sign. For r2 == r1 the
// discriminant vanishes at cos(theta2) = 0 and the raw branches cross; signs
// are reassigned following sign(cos theta2) so each returned curve is
// continuous (the two ellipses of the equal-radius intersection).
std::pair<WeldCurve, WeldCurve> full_seam(const PipeJoint& joint,
                                          int n_samples);

// Models the torch as a cylinder of radius torch_radius whose axis leaves
// each seam point along the outward bisector of the two pipe surface
// normals, extending probe_length. Records a violation wherever a sampled
// torch surface point lies inside either pipe.
std::vector<ClearanceViolation> clearance_check(
    const PipeJoint& joint, const WeldCurve& curve, double torch_radius,
    double probe_length, const TorchSampling& sampling = {});

// Implicit-surface residuals, |x^2+y^2-r1^2| and |dist(p, axis2)^2 - r2^2|.
std::array<double, 2> surface_residuals(const PipeJoint& joint,
                                        const CurvePoint& p);

}  // namespace indmath::weld
