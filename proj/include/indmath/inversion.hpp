#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "indmath/errors.hpp"
#include "indmath/plume.hpp"

namespace indmath::inversion {

// Linear operator from per-source emission rates (g/s) to per-receptor
// cumulative depositions (mg/m^2). Entry (i, j) is the deposition at
// receptor i from source j running at unit rate.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> receptor_ids;
    std::vector<std::string> source_ids;
};

struct EmissionEstimate {
    Eigen::VectorXd q;          // g/s
    double residual_norm = 0.0; // mg/m^2
    int rank = 0;
    double condition = 0.0;     // diagonal-ratio estimate from the factorization
    bool rank_deficient = false;
    std::vector<bool> active;   // NNLS: component pinned at the zero bound
    int iterations = 0;
};

DesignMatrix build_design_matrix(const std::vector<plume::Source>& sources,
                                 const std::vector<plume::Receptor>& receptors,
                                 const std::vector<plume::WindInterval>& wind,
                                 const plume::DispersionSpec& spec,
                                 const plume::Contaminant& contaminant);

// Unconstrained least squares through a rank-revealing orthogonal
// factorization; rank deficiency is reported on the estimate and the
// minimum-norm solution returned.
EmissionEstimate solve_least_squares(const DesignMatrix& matrix,
                                     const Eigen::VectorXd& d);

// Nonnegative least squares by Lawson-Hanson active-set iteration.
EmissionEstimate solve_nnls(const DesignMatrix& matrix,
                            const Eigen::VectorXd& d);

}  // namespace indmath::inversion
