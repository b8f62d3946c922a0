#include <algorithm>

#include "dnc/error.hpp"
#include "dnc/opalg.hpp"

namespace dnc {

InternalOperator InternalOperator::identity(int d)
{
    if (d < 1) throw Error("internal dimension must be at least 1");
    InternalOperator op;
    op.dim_ = d;
    return op;
}

InternalOperator InternalOperator::permutation(std::vector<int> perm, std::vector<Phase> phases)
{
    const int d = static_cast<int>(perm.size());
    if (d < 1) throw Error("generalized permutation needs at least one point");
    if (phases.empty()) phases.assign(perm.size(), Phase());
    if (phases.size() != perm.size()) throw Error("generalized permutation: perm and phases differ in length");
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p >= d || seen[static_cast<std::size_t>(p)]) throw Error("generalized permutation: perm is not a bijection on 0..d-1");
        seen[static_cast<std::size_t>(p)] = true;
    }
    InternalOperator op;
    op.dim_ = d;
    bool trivial = true;
    for (int m = 0; m < d; ++m)
        trivial = trivial && perm[static_cast<std::size_t>(m)] == m && phases[static_cast<std::size_t>(m)].is_one();
    if (trivial) return op;
    op.kind_ = Kind::GeneralizedPermutation;
    op.perm_ = std::move(perm);
    op.phases_ = std::move(phases);
    return op;
}

InternalOperator InternalOperator::dense(int d, std::vector<Scalar> entries)
{
    if (d < 1 || entries.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
        throw Error("dense internal operator needs d*d entries");
    InternalOperator op;
    op.kind_ = Kind::Dense;
    op.dim_ = d;
    op.entries_ = std::move(entries);
    return op;
}

InternalOperator InternalOperator::from_matrix(const Eigen::MatrixXcd& m)
{
    if (m.rows() != m.cols()) throw Error("internal operator must be square");
    const int d = static_cast<int>(m.rows());
    std::vector<Scalar> entries;
    entries.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) entries.push_back(Scalar::approx(m(r, c)));
    return dense(d, std::move(entries));
}

bool InternalOperator::is_exact() const
{
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::GeneralizedPermutation:
        return std::all_of(phases_.begin(), phases_.end(), [](const Phase& p) { return p.is_exact(); });
    case Kind::Dense:
        return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_exact(); });
    }
    return true;
}

Scalar InternalOperator::entry(int row, int col) const
{
    switch (kind_) {
    case Kind::Identity: return row == col ? Scalar(1) : Scalar();
    case Kind::GeneralizedPermutation:
        return perm_[static_cast<std::size_t>(col)] == row ? Scalar(phases_[static_cast<std::size_t>(col)]) : Scalar();
    case Kind::Dense: return entries_[static_cast<std::size_t>(row * dim_ + col)];
    }
    return Scalar();
}

void InternalOperator::apply_basis(int m, std::vector<std::pair<int, Scalar>>& out) const
{
    out.clear();
    switch (kind_) {
    case Kind::Identity: out.emplace_back(m, Scalar(1)); break;
    case Kind::GeneralizedPermutation:
        out.emplace_back(perm_[static_cast<std::size_t>(m)], Scalar(phases_[static_cast<std::size_t>(m)]));
        break;
    case Kind::Dense:
        for (int r = 0; r < dim_; ++r) {
            const Scalar& v = entries_[static_cast<std::size_t>(r * dim_ + m)];
            if (!v.is_zero()) out.emplace_back(r, v);
        }
        break;
    }
}

InternalOperator InternalOperator::adjoint() const
{
    switch (kind_) {
    case Kind::Identity: return *this;
    case Kind::GeneralizedPermutation: {
        std::vector<int> inv(perm_.size());
        std::vector<Phase> ph(perm_.size());
        for (std::size_t m = 0; m < perm_.size(); ++m) {
            inv[static_cast<std::size_t>(perm_[m])] = static_cast<int>(m);
            ph[static_cast<std::size_t>(perm_[m])] = phases_[m].conj();
        }
        return permutation(std::move(inv), std::move(ph));
    }
    case Kind::Dense: {
        std::vector<Scalar> e(entries_.size());
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                e[static_cast<std::size_t>(c * dim_ + r)] = entries_[static_cast<std::size_t>(r * dim_ + c)].conj();
        return dense(dim_, std::move(e));
    }
    }
    return *this;
}

InternalOperator compose(const InternalOperator& g, const InternalOperator& f)
{
    using Kind = InternalOperator::Kind;
    if (g.dim_ != f.dim_) throw Error("internal dimensions differ in composition");
    if (g.kind_ == Kind::Identity) return f;
    if (f.kind_ == Kind::Identity) return g;
    const int d = g.dim_;
    if (g.kind_ == Kind::GeneralizedPermutation && f.kind_ == Kind::GeneralizedPermutation) {
        std::vector<int> perm(static_cast<std::size_t>(d));
        std::vector<Phase> ph(static_cast<std::size_t>(d));
        for (std::size_t m = 0; m < perm.size(); ++m) {
            auto mid = static_cast<std::size_t>(f.perm_[m]);
            perm[m] = g.perm_[mid];
            ph[m] = g.phases_[mid] * f.phases_[m];
        }
        return InternalOperator::permutation(std::move(perm), std::move(ph));
    }
    std::vector<Scalar> e(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            Scalar acc;
            for (int t = 0; t < d; ++t) {
                Scalar a = g.entry(r, t);
                if (a.is_zero()) continue;
                Scalar b = f.entry(t, c);
                if (!b.is_zero()) acc += a * b;
            }
            e[static_cast<std::size_t>(r * d + c)] = acc;
        }
    }
    return InternalOperator::dense(d, std::move(e));
}

Eigen::MatrixXcd InternalOperator::matrix() const
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m(r, c) = entry(r, c).value();
    return m;
}

bool operator==(const InternalOperator& a, const InternalOperator& b)
{
    if (a.dim_ != b.dim_) return false;
    using Kind = InternalOperator::Kind;
    if (a.kind_ != b.kind_) {
        if (a.kind_ != Kind::Dense && b.kind_ != Kind::Dense) return false;
    } else if (a.kind_ == Kind::Identity) {
        return true;
    } else if (a.kind_ == Kind::GeneralizedPermutation) {
        return a.perm_ == b.perm_ && a.phases_ == b.phases_;
    }
    for (int r = 0; r < a.dim_; ++r)
        for (int c = 0; c < a.dim_; ++c)
            if (!(a.entry(r, c) == b.entry(r, c))) return false;
    return true;
}

} // namespace dnc
