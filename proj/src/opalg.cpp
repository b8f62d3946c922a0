#include "dnc/opalg.hpp"

#include <algorithm>
#include <cmath>

#include "dnc/error.hpp"

namespace dnc {

namespace {

void require_same_space(const Space& a, const Space& b, const char* what)
{
    if (!(a == b)) throw Error(std::string(what) + ": spaces differ (" + a.to_string() + " vs " + b.to_string() + ")");
}

BandShiftFactor compose_factor(const BandShiftFactor& g, const BandShiftFactor& f, CoordKind kind)
{
    BandShiftFactor out;
    out.shift = f.shift + g.shift;
    out.threshold = kind == CoordKind::HalfLine ? std::max(f.threshold, g.threshold - f.shift) : 0;
    out.w = f.w * g.w;
    return out;
}

} // namespace

std::string LatticeSignature::to_string() const
{
    std::string lattice;
    for (CoordKind c : coords) {
        if (!lattice.empty()) lattice += " x ";
        lattice += c == CoordKind::HalfLine ? "N0" : "Z";
    }
    std::string internal = "C^" + std::to_string(internal_dim);
    return lattice.empty() ? internal : "l2(" + lattice + ") (x) " + internal;
}

std::string Space::to_string() const
{
    std::string out;
    for (const auto& b : blocks) {
        if (!out.empty()) out += " (+) ";
        out += b.to_string();
    }
    return out.empty() ? "{0}" : out;
}

std::string BasisIndex::to_string() const
{
    std::string out = "b" + std::to_string(block) + ":(";
    for (std::size_t c = 0; c < k.size(); ++c) {
        if (c) out += ',';
        out += std::to_string(k[c]);
    }
    return out + ")#" + std::to_string(internal);
}

// ---------------------------------------------------------------- vectors

SupportedVector SupportedVector::basis(const Space& space, const BasisIndex& idx, const Scalar& c)
{
    SupportedVector v(space);
    v.add(idx, c);
    return v;
}

void SupportedVector::check_index(const BasisIndex& idx) const
{
    if (idx.block < 0 || idx.block >= static_cast<int>(space_.blocks.size())) throw Error("basis index block out of range");
    const auto& sig = space_.blocks[static_cast<std::size_t>(idx.block)];
    if (idx.k.size() != sig.coords.size()) throw Error("basis index has the wrong number of coordinates");
    if (idx.internal < 0 || idx.internal >= sig.internal_dim) throw Error("internal index out of range");
    for (std::size_t c = 0; c < idx.k.size(); ++c)
        if (sig.coords[c] == CoordKind::HalfLine && idx.k[c] < 0) throw Error("negative index on a half-line coordinate");
}

void SupportedVector::add(const BasisIndex& idx, const Scalar& c)
{
    if (c.is_zero()) return;
    auto it = entries_.find(idx);
    if (it == entries_.end()) {
        check_index(idx);
        entries_.emplace(idx, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
}

Scalar SupportedVector::coefficient(const BasisIndex& idx) const
{
    auto it = entries_.find(idx);
    return it == entries_.end() ? Scalar() : it->second;
}

SupportedVector& SupportedVector::operator+=(const SupportedVector& o)
{
    require_same_space(space_, o.space_, "vector sum");
    for (const auto& [idx, c] : o.entries_) add(idx, c);
    return *this;
}

SupportedVector& SupportedVector::operator-=(const SupportedVector& o)
{
    require_same_space(space_, o.space_, "vector difference");
    for (const auto& [idx, c] : o.entries_) add(idx, -c);
    return *this;
}

SupportedVector SupportedVector::scaled(const Scalar& c) const
{
    SupportedVector out(space_);
    for (const auto& [idx, v] : entries_) out.add(idx, v * c);
    return out;
}

double SupportedVector::norm() const
{
    double s = 0.0;
    for (const auto& [idx, c] : entries_) s += std::norm(c.value());
    return std::sqrt(s);
}

bool SupportedVector::is_exact() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second.is_exact(); });
}

Scalar inner(const SupportedVector& x, const SupportedVector& y)
{
    require_same_space(x.space(), y.space(), "inner product");
    Scalar acc;
    const bool x_small = x.support_size() <= y.support_size();
    const auto& small = x_small ? x.entries() : y.entries();
    const auto& large = x_small ? y.entries() : x.entries();
    for (const auto& [idx, c] : small) {
        auto it = large.find(idx);
        if (it == large.end()) continue;
        const Scalar& xv = x_small ? c : it->second;
        const Scalar& yv = x_small ? it->second : c;
        acc += xv.conj() * yv;
    }
    return acc;
}

// -------------------------------------------------------------- operators

StructuredOperator::StructuredOperator(Space space) : space_(std::move(space)), blocks_(space_.blocks.size()) {}

StructuredOperator StructuredOperator::identity(const Space& space)
{
    StructuredOperator op(space);
    for (std::size_t b = 0; b < space.blocks.size(); ++b) {
        const auto& sig = space.blocks[b];
        op.add_term(static_cast<int>(b), {Scalar(1), std::vector<BandShiftFactor>(sig.coords.size()),
                                          InternalOperator::identity(sig.internal_dim)});
    }
    return op;
}

StructuredOperator StructuredOperator::from_terms(const LatticeSignature& sig, std::vector<OpTerm> terms)
{
    StructuredOperator op(Space::single(sig));
    for (auto& t : terms) op.add_term(0, std::move(t));
    return op;
}

StructuredOperator StructuredOperator::block_diagonal(const std::vector<StructuredOperator>& parts)
{
    Space space;
    for (const auto& p : parts) space.blocks.insert(space.blocks.end(), p.space_.blocks.begin(), p.space_.blocks.end());
    StructuredOperator op(space);
    std::size_t b = 0;
    for (const auto& p : parts)
        for (const auto& terms : p.blocks_) op.blocks_[b++] = terms;
    return op;
}

std::size_t StructuredOperator::term_count() const
{
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.size();
    return n;
}

void StructuredOperator::add_term(int block, OpTerm term)
{
    if (block < 0 || block >= static_cast<int>(blocks_.size())) throw Error("operator block out of range");
    const auto& sig = space_.blocks[static_cast<std::size_t>(block)];
    if (term.factors.size() != sig.coords.size()) throw Error("operator term has the wrong number of factors");
    if (term.internal.dim() != sig.internal_dim) throw Error("operator term has the wrong internal dimension");
    for (std::size_t c = 0; c < sig.coords.size(); ++c) {
        auto& f = term.factors[c];
        if (sig.coords[c] == CoordKind::Line) {
            f.threshold = 0;
        } else if (f.threshold < std::max<std::int64_t>(0, -f.shift)) {
            throw Error("half-line factor threshold below max(0, -shift)");
        }
    }
    if (term.coef.is_zero()) return;
    auto& terms = blocks_[static_cast<std::size_t>(block)];
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        if (it->factors == term.factors && it->internal == term.internal) {
            it->coef += term.coef;
            if (it->coef.is_zero()) terms.erase(it);
            return;
        }
    }
    terms.push_back(std::move(term));
}

StructuredOperator& StructuredOperator::operator+=(const StructuredOperator& o)
{
    require_same_space(space_, o.space_, "operator sum");
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (const auto& t : o.blocks_[b]) add_term(static_cast<int>(b), t);
    return *this;
}

StructuredOperator& StructuredOperator::operator-=(const StructuredOperator& o)
{
    return *this += o.scaled(Scalar(-1));
}

StructuredOperator StructuredOperator::scaled(const Scalar& c) const
{
    StructuredOperator out(space_);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        for (auto t : blocks_[b]) {
            t.coef *= c;
            out.add_term(static_cast<int>(b), std::move(t));
        }
    }
    return out;
}

void StructuredOperator::check_invariants() const
{
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto& sig = space_.blocks[b];
        for (const auto& t : blocks_[b]) {
            if (t.coef.is_zero()) throw Error("operator stores a zero term");
            for (std::size_t c = 0; c < sig.coords.size(); ++c) {
                const auto& f = t.factors[c];
                if (sig.coords[c] == CoordKind::HalfLine && f.threshold < std::max<std::int64_t>(0, -f.shift))
                    throw Error("half-line factor threshold below max(0, -shift)");
            }
        }
    }
}

StructuredOperator op_compose(const StructuredOperator& g, const StructuredOperator& f)
{
    require_same_space(g.space(), f.space(), "op_compose");
    StructuredOperator out(g.space());
    for (std::size_t b = 0; b < g.blocks().size(); ++b) {
        const auto& sig = g.space().blocks[b];
        for (const auto& tg : g.blocks()[b]) {
            for (const auto& tf : f.blocks()[b]) {
                OpTerm t;
                t.coef = tg.coef * tf.coef;
                t.factors.resize(sig.coords.size());
                Phase extra;
                for (std::size_t c = 0; c < sig.coords.size(); ++c) {
                    t.factors[c] = compose_factor(tg.factors[c], tf.factors[c], sig.coords[c]);
                    extra *= tg.factors[c].w.pow(tf.factors[c].shift);
                }
                t.coef = t.coef.times(extra);
                t.internal = compose(tg.internal, tf.internal);
                out.add_term(static_cast<int>(b), std::move(t));
            }
        }
    }
    return out;
}

StructuredOperator op_adjoint(const StructuredOperator& f)
{
    StructuredOperator out(f.space());
    for (std::size_t b = 0; b < f.blocks().size(); ++b) {
        const auto& sig = f.space().blocks[b];
        for (const auto& tf : f.blocks()[b]) {
            OpTerm t;
            t.factors.resize(sig.coords.size());
            Phase extra;
            for (std::size_t c = 0; c < sig.coords.size(); ++c) {
                const auto& fc = tf.factors[c];
                t.factors[c] = {-fc.shift, sig.coords[c] == CoordKind::HalfLine ? fc.threshold + fc.shift : 0, fc.w.conj()};
                extra *= fc.w.pow(fc.shift);
            }
            t.coef = tf.coef.conj().times(extra);
            t.internal = tf.internal.adjoint();
            out.add_term(static_cast<int>(b), std::move(t));
        }
    }
    return out;
}

SupportedVector op_apply(const StructuredOperator& f, const SupportedVector& x)
{
    require_same_space(f.space(), x.space(), "op_apply");
    SupportedVector out(f.space());
    std::vector<std::pair<int, Scalar>> column;
    for (const auto& [idx, c] : x.entries()) {
        const auto b = static_cast<std::size_t>(idx.block);
        const auto& sig = f.space().blocks[b];
        for (const auto& t : f.blocks()[b]) {
            BasisIndex target{idx.block, idx.k, 0};
            Phase ph;
            bool killed = false;
            for (std::size_t co = 0; co < sig.coords.size(); ++co) {
                const auto& fc = t.factors[co];
                const std::int64_t k = idx.k[co];
                if (sig.coords[co] == CoordKind::HalfLine && k < fc.threshold) {
                    killed = true;
                    break;
                }
                if (!fc.w.is_one() && k != 0) ph *= fc.w.pow(k);
                target.k[co] = k + fc.shift;
            }
            if (killed) continue;
            const Scalar base = (c * t.coef).times(ph);
            t.internal.apply_basis(idx.internal, column);
            for (const auto& [row, v] : column) {
                target.internal = row;
                out.add(target, base * v);
            }
        }
    }
    return out;
}

// ----------------------------------------------------------------- window

Window::Window(const Space& space, int K) : space_(space), K_(K)
{
    if (K < 1) throw Error("window K must be at least 1");
    for (std::size_t b = 0; b < space.blocks.size(); ++b) {
        const auto& sig = space.blocks[b];
        block_offset_.push_back(basis_.size());
        const std::size_t l = sig.coords.size();
        std::vector<std::int64_t> lo(l), hi(l);
        std::size_t count = static_cast<std::size_t>(sig.internal_dim);
        for (std::size_t c = 0; c < l; ++c) {
            lo[c] = sig.coords[c] == CoordKind::HalfLine ? 0 : -K;
            hi[c] = K - 1;
            count *= static_cast<std::size_t>(hi[c] - lo[c] + 1);
            if (count > 50'000'000) throw Error("window basis too large");
        }
        BasisIndex idx{static_cast<int>(b), lo, 0};
        for (bool done = false; !done;) {
            for (int m = 0; m < sig.internal_dim; ++m) {
                idx.internal = m;
                basis_.push_back(idx);
            }
            done = true;
            for (std::size_t c = l; c-- > 0;) {
                if (idx.k[c] < hi[c]) {
                    ++idx.k[c];
                    done = false;
                    break;
                }
                idx.k[c] = lo[c];
            }
        }
    }
    block_offset_.push_back(basis_.size());
}

std::optional<std::size_t> Window::find(const BasisIndex& idx) const
{
    if (idx.block < 0 || idx.block >= static_cast<int>(space_.blocks.size())) return std::nullopt;
    const auto& sig = space_.blocks[static_cast<std::size_t>(idx.block)];
    if (idx.k.size() != sig.coords.size() || idx.internal < 0 || idx.internal >= sig.internal_dim) return std::nullopt;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < sig.coords.size(); ++c) {
        const std::int64_t lo = sig.coords[c] == CoordKind::HalfLine ? 0 : -K_;
        const std::int64_t width = K_ - lo;
        const std::int64_t k = idx.k[c];
        if (k < lo || k >= K_) return std::nullopt;
        pos = pos * static_cast<std::size_t>(width) + static_cast<std::size_t>(k - lo);
    }
    pos = pos * static_cast<std::size_t>(sig.internal_dim) + static_cast<std::size_t>(idx.internal);
    return block_offset_[static_cast<std::size_t>(idx.block)] + pos;
}

Eigen::VectorXcd Window::restrict(const SupportedVector& v) const
{
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.size()));
    for (const auto& [idx, c] : v.entries())
        if (auto p = find(idx)) out(static_cast<Eigen::Index>(*p)) = c.value();
    return out;
}

SupportedVector Window::lift(const Eigen::VectorXcd& v) const
{
    SupportedVector out(space_);
    for (Eigen::Index p = 0; p < v.size(); ++p)
        if (std::abs(v(p)) >= Scalar::kFloatZero) out.add(basis_[static_cast<std::size_t>(p)], Scalar::approx(v(p)));
    return out;
}

Eigen::MatrixXcd op_materialize(const StructuredOperator& f, int K)
{
    Window win(f.space(), K);
    if (win.size() > kMaxMaterializeDim)
        throw Error("window dimension " + std::to_string(win.size()) + " exceeds the materialization limit "
                    + std::to_string(kMaxMaterializeDim) + " (dense matrix would need about "
                    + std::to_string(win.size() * win.size() * 16 / (1024 * 1024)) + " MiB)");
    const auto n = static_cast<Eigen::Index>(win.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t col = 0; col < win.size(); ++col) {
        SupportedVector img = op_apply(f, SupportedVector::basis(f.space(), win.at(col)));
        for (const auto& [idx, c] : img.entries())
            if (auto row = win.find(idx)) m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = c.value();
    }
    return m;
}

double op_equal_on_window(const StructuredOperator& f, const StructuredOperator& g, int K)
{
    require_same_space(f.space(), g.space(), "op_equal_on_window");
    Window win(f.space(), K);
    double worst = 0.0;
    for (const auto& idx : win.basis()) {
        SupportedVector x = SupportedVector::basis(f.space(), idx);
        SupportedVector d = op_apply(f, x) - op_apply(g, x);
        if (!d.is_zero()) worst = std::max(worst, d.norm());
    }
    return worst;
}

} // namespace dnc
