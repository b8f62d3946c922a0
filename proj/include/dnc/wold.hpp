#pragma once

#include <optional>
#include <vector>

#include "dnc/opalg.hpp"
#include "dnc/tuples.hpp"

namespace dnc {

struct WoldConfig {
    int K = 6;
    int k_max = 64;
    double rank_tol = 1e-10;        ///< Gram-Schmidt drop threshold
    double reliable_residual = 1e-8; ///< extraction residual bound for reliable data
};

/// Value of a projection together with its convergence status.
struct ProjectionResult {
    SupportedVector value;
    bool converged = true;
    int iterations = 0;
};

/// P_i^iso x as the series sum_k V_i^k (1 - V_i V_i^*) V_i^{*k} x.
///
/// Summation stops when V_i^{*k} x = 0, or once the iterates
/// V_i^k V_i^{*k} x have agreed for more than (largest half-line index in
/// the support of x) + 1 consecutive steps, and at least 2. Both projections
/// use the same stopping point, so they add up to x exactly.
ProjectionResult defect_projection_apply(int i, const IsometryTuple& t, const SupportedVector& x, int k_max = 64);
/// P_i^uni x as the stabilized value of V_i^k V_i^{*k} x.
ProjectionResult unitary_projection_apply(int i, const IsometryTuple& t, const SupportedVector& x, int k_max = 64);
/// P_A x = prod_{i in A} P_i^iso prod_{j not in A} P_j^uni x.
ProjectionResult sector_projection_apply(const IndexSet& A, const IsometryTuple& t, const SupportedVector& x, int k_max = 64);
/// Q_A x = prod_{i in A} (1 - V_i V_i^*) x.
SupportedVector defect_product_apply(const IndexSet& A, const IsometryTuple& t, const SupportedVector& x);

struct WanderingBasis {
    std::vector<SupportedVector> vectors; ///< orthonormal
    bool exact = true;
    bool converged = true;
};
WanderingBasis wandering_basis(const IndexSet& A, const IsometryTuple& t, const WoldConfig& cfg = {});

struct Extraction {
    WanderingData data;
    double residual = 0.0;
    int window_margin = 0;
    bool reliable = true;
    bool converged = true;
    bool exact = true;
};
Extraction extract_wandering_data(const IndexSet& A, const IsometryTuple& t, const WoldConfig& cfg = {});
/// Same, from an already computed basis.
Extraction extract_from_basis(const IndexSet& A, const IsometryTuple& t, const WanderingBasis& basis, const WoldConfig& cfg);

struct SectorDimension {
    IndexSet A;
    int window_dim = 0;
    bool converged = true;
};
std::vector<SectorDimension> classify_sectors(const IsometryTuple& t, const WoldConfig& cfg = {});

struct SectorReport {
    IndexSet A;
    int window_dim_H_A = 0;
    int wandering_dim = 0;
    WanderingData wandering_data;
    double extraction_residual = 0.0;
    int window_margin = 0;
    bool reliable = true;
    bool exact = true;
    bool converged = true;
    /// Absent when the sector is empty or its data are unreliable.
    std::optional<double> reconstruction_residual;
    std::string note;
};

struct WoldReport {
    int K = 0;
    int window_dim = 0;
    std::vector<SectorReport> sectors; ///< all 2^n subsets, by bitmask order
    double completeness_residual = 0.0;
    double orthogonality_residual = 0.0;
    bool converged = true;
};
WoldReport wold_decompose(const IsometryTuple& t, const WoldConfig& cfg = {});

/// phi(e_k (x) w_m) = V_{a_1}^{k_1} ... V_{a_l}^{k_l} b_m, extended linearly,
/// from the standard-model space of sector A into the tuple's space.
SupportedVector phi_apply(const IndexSet& A, const IsometryTuple& t, const std::vector<SupportedVector>& basis,
                          const SupportedVector& y);

/// All subsets of {1..n} in bitmask order.
std::vector<IndexSet> all_subsets(int n);

} // namespace dnc
