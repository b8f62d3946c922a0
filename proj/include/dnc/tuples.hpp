#pragma once

#include <string>
#include <vector>

#include "dnc/opalg.hpp"
#include "dnc/phase.hpp"

namespace dnc {

/// Subset of {1..n}, kept sorted.
using IndexSet = std::vector<int>;

IndexSet complement(const IndexSet& A, int n);
std::string index_set_to_string(const IndexSet& A);

/// A-wandering data: unitaries on W for the indices outside A, in
/// increasing index order.
struct WanderingData {
    IndexSet A;
    int dim_W = 0;
    std::vector<InternalOperator> unitaries;
};

/// How the wandering space of one block of a tuple is modelled.
struct SectorModel {
    enum class Kind { Finite, Torus };
    Kind kind = Kind::Finite;
    IndexSet A;
    WanderingData data; ///< Finite only
};

enum class TupleKind { Standard, DirectSum, Dilation, User };

struct IsometryTuple {
    StructureConstants zc;
    std::vector<StructuredOperator> ops;
    TupleKind kind = TupleKind::User;
    /// One entry per block when every block is a standard sector.
    std::vector<SectorModel> sectors;

    int n() const { return zc.n(); }
    const Space& space() const { return ops.front().space(); }
    bool is_standard_sum() const { return !sectors.empty() && sectors.size() == space().blocks.size(); }
};

/// Residuals of U_i^* U_i - 1 and of both candidate torus relations
/// (second factor unstarred, as in the defining relations, and the
/// variant with the second factor starred).
struct TorusFormReport {
    double unitarity = 0.0;
    double unstarred_form = 0.0; ///< U_i^* U_j - conj(z_ij) U_j U_i^*
    double starred_form = 0.0;   ///< U_i^* U_j - conj(z_ij) U_j^* U_i
    int worst_i = 0;
    int worst_j = 0;
};
TorusFormReport check_torus_relations(const StructureConstants& zc, const WanderingData& data);

/// Rejects data that are not unitary or violate the torus relations beyond tol.
void validate_wandering_data(const StructureConstants& zc, const WanderingData& data, double tol = 1e-10);

IsometryTuple make_standard_tuple(const StructureConstants& zc, const WanderingData& data, double tol = 1e-10);
/// Standard tuple for sector A whose wandering space is l^2(Z^{|A^c|})
/// carrying the torus generators.
IsometryTuple make_torus_sector(const StructureConstants& zc, const IndexSet& A);
/// The m phase-twisted shifts on l^2(Z^m).
std::vector<StructuredOperator> make_torus_generators(int m, const StructureConstants& zc_m);
/// Clock and cyclic shift for |A^c| = 2; lambda times the cyclic shift for
/// |A^c| = 1; no unitaries when A is everything.
WanderingData make_clock_shift_data(const IndexSet& A, int d, const StructureConstants& zc, const Phase& lambda = Phase());

IsometryTuple tuple_direct_sum(const std::vector<IsometryTuple>& parts);

struct Dilation {
    IsometryTuple dilated;
    Space original;

    /// The inclusion H -> K (indices are shared).
    SupportedVector embed(const SupportedVector& x) const;
    /// P_H: drops components with a negative index on a dilated coordinate.
    SupportedVector compress(const SupportedVector& y) const;
};
Dilation dilate_tuple(const IsometryTuple& t);

struct RelationResidual {
    std::string relation;
    int i = 0;
    int j = 0;
    double residual = 0.0;
};

struct RelationReport {
    std::vector<RelationResidual> entries;
    double max_residual = 0.0;
    double tol = 1e-10;
    bool ok() const { return max_residual <= tol; }
};
RelationReport verify_tuple_relations(const IsometryTuple& t, int K, double tol = 1e-10);

} // namespace dnc
