#include "indmath/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace indmath::inversion {

namespace {

// Rank from a column-pivoted QR with a relative diagonal tolerance, plus a
// crude condition estimate from the extreme R diagonals.
struct RankInfo {
    int rank;
    double condition;
};

RankInfo rank_of(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                 int cols) {
    const Eigen::VectorXd diag =
        qr.matrixR().topLeftCorner(std::min<int>(qr.rows(), cols), cols)
            .diagonal()
            .cwiseAbs();
    if (diag.size() == 0) return {0, 0.0};
    const double dmax = diag.maxCoeff();
    if (dmax == 0.0) return {0, std::numeric_limits<double>::infinity()};
    const double tol = dmax * 1e-12 * std::max<int>(qr.rows(), cols);
    int rank = 0;
    double dmin = dmax;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag[i] > tol) {
            ++rank;
            dmin = std::min(dmin, diag[i]);
        }
    }
    return {rank, dmax / dmin};
}

}  // namespace

DesignMatrix build_design_matrix(const std::vector<plume::Source>& sources,
                                 const std::vector<plume::Receptor>& receptors,
                                 const std::vector<plume::WindInterval>& wind,
                                 const plume::DispersionSpec& spec,
                                 const plume::Contaminant& contaminant) {
    if (sources.empty() || receptors.empty())
        throw EmptyScenario("design matrix needs at least one source and one receptor");

    DesignMatrix matrix;
    matrix.values.resize(static_cast<Eigen::Index>(receptors.size()),
                         static_cast<Eigen::Index>(sources.size()));
    for (size_t j = 0; j < sources.size(); ++j) {
        plume::Source unit = sources[j];
        unit.q = 1.0;
        const std::vector<plume::Source> one{unit};
        for (size_t i = 0; i < receptors.size(); ++i)
            matrix.values(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(j)) =
                plume::deposition(one, receptors[i], wind, spec, contaminant);
        matrix.source_ids.push_back(sources[j].id);
    }
    for (const auto& r : receptors) matrix.receptor_ids.push_back(r.id);
    return matrix;
}

EmissionEstimate solve_least_squares(const DesignMatrix& matrix,
                                     const Eigen::VectorXd& d) {
    const Eigen::MatrixXd& G = matrix.values;
    if (d.size() != G.rows())
        throw DimensionMismatch("measurement vector length " +
                                std::to_string(d.size()) +
                                " does not match matrix rows " +
                                std::to_string(G.rows()));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(G);
    cod.setThreshold(1e-12);
    EmissionEstimate est;
    est.q = cod.solve(d);
    est.residual_norm = (G * est.q - d).norm();
    est.rank = static_cast<int>(cod.rank());
    est.rank_deficient = est.rank < G.cols();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    est.condition = rank_of(qr, static_cast<int>(G.cols())).condition;
    est.active.assign(static_cast<size_t>(G.cols()), false);
    return est;
}

EmissionEstimate solve_nnls(const DesignMatrix& matrix,
                            const Eigen::VectorXd& d) {
    const Eigen::MatrixXd& G = matrix.values;
    if (d.size() != G.rows())
        throw DimensionMismatch("measurement vector length " +
                                std::to_string(d.size()) +
                                " does not match matrix rows " +
                                std::to_string(G.rows()));

    const Eigen::Index n = G.cols();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<size_t>(n), false);
    const int max_iter = 30 * static_cast<int>(n) + 30;
    int iter = 0;

    // Least squares on the passive columns only; zeros elsewhere.
    auto passive_solve = [&](const std::vector<bool>& pset) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (pset[static_cast<size_t>(j)]) idx.push_back(j);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        if (idx.empty()) return z;
        Eigen::MatrixXd Gp(G.rows(), static_cast<Eigen::Index>(idx.size()));
        for (size_t k = 0; k < idx.size(); ++k) Gp.col(k) = G.col(idx[k]);
        const Eigen::VectorXd zp =
            Gp.colPivHouseholderQr().solve(d);
        for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
        return z;
    };

    while (true) {
        const Eigen::VectorXd w = G.transpose() * (d - G * q);
        // Pick the most negative-gradient free coordinate whose trial
        // solve actually moves it positive; near-dependent columns are
        // rejected for this round (classical Lawson-Hanson guard).
        std::vector<bool> rejected(static_cast<size_t>(n), false);
        Eigen::Index best = -1;
        Eigen::VectorXd z;
        while (true) {
            best = -1;
            double wmax = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (!passive[static_cast<size_t>(j)] &&
                    !rejected[static_cast<size_t>(j)] && w[j] > wmax) {
                    wmax = w[j];
                    best = j;
                }
            }
            if (best < 0) break;
            passive[static_cast<size_t>(best)] = true;
            z = passive_solve(passive);
            if (z[best] > 0.0) break;
            passive[static_cast<size_t>(best)] = false;
            rejected[static_cast<size_t>(best)] = true;
        }
        if (best < 0) break;  // KKT satisfied

        while (true) {
            if (++iter > max_iter)
                throw IterationLimit("nnls exceeded " +
                                     std::to_string(max_iter) + " iterations");
            bool feasible = true;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<size_t>(j)] && z[j] <= 0.0) {
                    feasible = false;
                    const double t = q[j] / (q[j] - z[j]);
                    alpha = std::min(alpha, t);
                }
            }
            if (feasible) break;
            q += alpha * (z - q);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<size_t>(j)] && q[j] <= 1e-14) {
                    q[j] = 0.0;
                    passive[static_cast<size_t>(j)] = false;
                }
            }
            z = passive_solve(passive);
        }
        q = z;
    }

    EmissionEstimate est;
    est.q = q;
    est.residual_norm = (G * q - d).norm();
    est.iterations = iter;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    const RankInfo info = rank_of(qr, static_cast<int>(n));
    est.rank = info.rank;
    est.condition = info.condition;
    est.rank_deficient = est.rank < n;
    est.active.resize(static_cast<size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j)
        est.active[static_cast<size_t>(j)] = !passive[static_cast<size_t>(j)];
    return est;
}

}  // namespace indmath::inversion
