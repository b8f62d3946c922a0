#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dnc/phase.hpp"
#include "dnc/scalar.hpp"

namespace dnc {

enum class CoordKind { HalfLine, Line };

/// l^2 over a product of N_0 and Z coordinates, tensored with C^d.
struct LatticeSignature {
    std::vector<CoordKind> coords;
    int internal_dim = 1;

    friend bool operator==(const LatticeSignature&, const LatticeSignature&) = default;
    std::string to_string() const;
};

/// Orthogonal direct sum of lattice blocks (a tagged union of index sets).
struct Space {
    std::vector<LatticeSignature> blocks;

    static Space single(LatticeSignature sig) { return Space{{std::move(sig)}}; }
    friend bool operator==(const Space&, const Space&) = default;
    std::string to_string() const;
};

/// e_k -> w^k e_{k+s} for k >= t (HalfLine), for every k (Line).
struct BandShiftFactor {
    std::int64_t shift = 0;
    std::int64_t threshold = 0;
    Phase w;

    friend bool operator==(const BandShiftFactor&, const BandShiftFactor&) = default;
};

/// Finite operator on the internal factor C^d.
class InternalOperator {
public:
    enum class Kind { Identity, GeneralizedPermutation, Dense };

    InternalOperator() = default;
    static InternalOperator identity(int d);
    /// e_m -> phases[m] e_{perm[m]}.
    static InternalOperator permutation(std::vector<int> perm, std::vector<Phase> phases);
    /// Row-major d x d entries.
    static InternalOperator dense(int d, std::vector<Scalar> entries);
    static InternalOperator from_matrix(const Eigen::MatrixXcd& m);

    Kind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    bool is_exact() const;
    const std::vector<int>& perm() const noexcept { return perm_; }
    const std::vector<Phase>& phases() const noexcept { return phases_; }

    Scalar entry(int row, int col) const;
    /// Nonzero entries of column m.
    void apply_basis(int m, std::vector<std::pair<int, Scalar>>& out) const;

    InternalOperator adjoint() const;
    /// g after f.
    friend InternalOperator compose(const InternalOperator& g, const InternalOperator& f);

    Eigen::MatrixXcd matrix() const;

    friend bool operator==(const InternalOperator& a, const InternalOperator& b);

private:
    Kind kind_ = Kind::Identity;
    int dim_ = 1;
    std::vector<int> perm_;
    std::vector<Phase> phases_;
    std::vector<Scalar> entries_;
};

/// Basis label: block, lattice multi-index, internal index. Ordering is
/// lexicographic in that order and fixes every window basis.
struct BasisIndex {
    int block = 0;
    std::vector<std::int64_t> k;
    int internal = 0;

    friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
    std::string to_string() const;
};

/// Finitely supported vector with exact or approximate coefficients.
class SupportedVector {
public:
    SupportedVector() = default;
    explicit SupportedVector(Space space) : space_(std::move(space)) {}
    static SupportedVector basis(const Space& space, const BasisIndex& idx, const Scalar& c = Scalar(1));

    const Space& space() const noexcept { return space_; }
    const std::map<BasisIndex, Scalar>& entries() const noexcept { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    void add(const BasisIndex& idx, const Scalar& c);
    Scalar coefficient(const BasisIndex& idx) const;

    SupportedVector& operator+=(const SupportedVector& o);
    SupportedVector& operator-=(const SupportedVector& o);
    SupportedVector scaled(const Scalar& c) const;
    friend SupportedVector operator+(SupportedVector a, const SupportedVector& b) { return a += b; }
    friend SupportedVector operator-(SupportedVector a, const SupportedVector& b) { return a -= b; }
    friend bool operator==(const SupportedVector& a, const SupportedVector& b) { return (a - b).is_zero(); }

    double norm() const;
    bool is_exact() const;

private:
    void check_index(const BasisIndex& idx) const;

    Space space_;
    std::map<BasisIndex, Scalar> entries_;
};

/// <x, y>, conjugate-linear in x.
Scalar inner(const SupportedVector& x, const SupportedVector& y);

/// coef * (factor_1 x ... x factor_l) x internal.
struct OpTerm {
    Scalar coef;
    std::vector<BandShiftFactor> factors;
    InternalOperator internal;
};

/// Block-diagonal operator; each block is a finite sum of OpTerms.
class StructuredOperator {
public:
    StructuredOperator() = default;
    explicit StructuredOperator(Space space);
    static StructuredOperator identity(const Space& space);
    static StructuredOperator zero(const Space& space) { return StructuredOperator(space); }
    /// Single-block operator from terms.
    static StructuredOperator from_terms(const LatticeSignature& sig, std::vector<OpTerm> terms);
    static StructuredOperator block_diagonal(const std::vector<StructuredOperator>& parts);

    const Space& space() const noexcept { return space_; }
    const std::vector<std::vector<OpTerm>>& blocks() const noexcept { return blocks_; }
    std::size_t term_count() const;

    void add_term(int block, OpTerm term);

    StructuredOperator& operator+=(const StructuredOperator& o);
    StructuredOperator& operator-=(const StructuredOperator& o);
    StructuredOperator scaled(const Scalar& c) const;
    friend StructuredOperator operator+(StructuredOperator a, const StructuredOperator& b) { return a += b; }
    friend StructuredOperator operator-(StructuredOperator a, const StructuredOperator& b) { return a -= b; }

    /// Raises if a HalfLine factor violates t >= max(0, -s).
    void check_invariants() const;

private:
    Space space_;
    std::vector<std::vector<OpTerm>> blocks_;
};

StructuredOperator op_compose(const StructuredOperator& g, const StructuredOperator& f);
StructuredOperator op_adjoint(const StructuredOperator& f);
SupportedVector op_apply(const StructuredOperator& f, const SupportedVector& x);

/// Per-coordinate window: HalfLine {0..K-1}, Line {-K..K-1}.
class Window {
public:
    Window(const Space& space, int K);

    const Space& space() const noexcept { return space_; }
    int K() const noexcept { return K_; }
    std::size_t size() const noexcept { return basis_.size(); }
    const BasisIndex& at(std::size_t pos) const { return basis_[pos]; }
    const std::vector<BasisIndex>& basis() const noexcept { return basis_; }
    std::optional<std::size_t> find(const BasisIndex& idx) const;
    bool contains(const BasisIndex& idx) const { return find(idx).has_value(); }

    /// Coefficients on the window, in basis order; entries outside are dropped.
    Eigen::VectorXcd restrict(const SupportedVector& v) const;
    SupportedVector lift(const Eigen::VectorXcd& v) const;

private:
    Space space_;
    int K_;
    std::vector<BasisIndex> basis_;
    std::vector<std::size_t> block_offset_;
};

/// Largest window dimension op_materialize accepts.
inline constexpr std::size_t kMaxMaterializeDim = 20000;

Eigen::MatrixXcd op_materialize(const StructuredOperator& f, int K);
double op_equal_on_window(const StructuredOperator& f, const StructuredOperator& g, int K);

} // namespace dnc
