#include "dnc/wold.hpp"

#include <algorithm>
#include <cmath>

#include "dnc/error.hpp"

namespace dnc {

namespace {

bool same_vector(const SupportedVector& a, const SupportedVector& b)
{
    SupportedVector d = a - b;
    if (d.is_zero()) return true;
    if (d.is_exact()) return false;
    return d.norm() <= 1e-12 * std::max(1.0, a.norm());
}

std::int64_t max_half_line_index(const SupportedVector& x)
{
    std::int64_t m = -1;
    for (const auto& [idx, c] : x.entries()) {
        const auto& sig = x.space().blocks[static_cast<std::size_t>(idx.block)];
        for (std::size_t co = 0; co < idx.k.size(); ++co)
            if (sig.coords[co] == CoordKind::HalfLine) m = std::max(m, idx.k[co]);
    }
    return m;
}

struct Split {
    SupportedVector iso;
    SupportedVector uni;
    bool converged = true;
    int iterations = 0;
};

// Shared state for repeated projections on one tuple.
class Engine {
public:
    Engine(const IsometryTuple& t, int k_max) : t_(t), k_max_(k_max)
    {
        for (const auto& v : t.ops) adj_.push_back(op_adjoint(v));
    }

    SupportedVector V(int i, const SupportedVector& x) const { return op_apply(t_.ops[static_cast<std::size_t>(i - 1)], x); }
    SupportedVector Vs(int i, const SupportedVector& x) const { return op_apply(adj_[static_cast<std::size_t>(i - 1)], x); }

    Split split(int i, const SupportedVector& x) const
    {
        if (i < 1 || i > t_.n()) throw Error("isometry index " + std::to_string(i) + " out of range");
        Split out{SupportedVector(x.space()), SupportedVector(x.space()), true, 0};
        const std::int64_t needed = std::max<std::int64_t>(2, max_half_line_index(x) + 2);
        SupportedVector y = x; // V^{*k} x
        SupportedVector prev = x;
        std::int64_t run = 0;
        for (int k = 0;; ++k) {
            out.iterations = k;
            if (y.is_zero()) return out; // uni = 0, iso = x
            SupportedVector ystar = Vs(i, y);
            SupportedVector term = y - V(i, ystar);
            for (int p = 0; p < k; ++p) term = V(i, term);
            out.iso += term;
            y = std::move(ystar);
            SupportedVector p = y;
            for (int q = 0; q <= k; ++q) p = V(i, p);
            run = same_vector(p, prev) ? run + 1 : 0;
            prev = p;
            if (run >= needed || k + 1 >= k_max_) {
                out.uni = std::move(p);
                out.converged = run >= needed;
                out.iterations = k + 1;
                return out;
            }
        }
    }

    ProjectionResult sector(const IndexSet& A, const SupportedVector& x) const
    {
        ProjectionResult r{x, true, 0};
        for (int i = 1; i <= t_.n(); ++i) {
            if (r.value.is_zero()) break;
            const bool pure = std::find(A.begin(), A.end(), i) != A.end();
            Split s = split(i, r.value);
            r.value = pure ? std::move(s.iso) : std::move(s.uni);
            r.converged = r.converged && s.converged;
            r.iterations = std::max(r.iterations, s.iterations);
        }
        return r;
    }

    SupportedVector defect_product(const IndexSet& A, SupportedVector x) const
    {
        for (int i : A) {
            if (x.is_zero()) break;
            x -= V(i, Vs(i, x));
        }
        return x;
    }

    const IsometryTuple& tuple() const { return t_; }

private:
    const IsometryTuple& t_;
    int k_max_;
    std::vector<StructuredOperator> adj_;
};

// Sequential Gram-Schmidt. Exact while every norm is a rational square;
// returns false to request the floating-point pass.
bool orthonormalize(const std::vector<SupportedVector>& input, bool exact, double tol, std::vector<SupportedVector>& out)
{
    out.clear();
    for (const auto& raw : input) {
        SupportedVector v = exact ? raw : raw.scaled(Scalar::approx(1.0));
        for (int pass = 0; pass < (exact ? 1 : 2); ++pass)
            for (const auto& b : out) v -= b.scaled(inner(b, v));
        if (v.is_zero()) continue;
        if (exact) {
            auto nn = inner(v, v).as_rational();
            Rational root;
            if (!nn || !rational_sqrt(*nn, root)) return false;
            out.push_back(v.scaled(Scalar(Rational(1) / root)));
        } else {
            const double nv = v.norm();
            if (nv < tol) continue;
            out.push_back(v.scaled(Scalar::approx(1.0 / nv)));
        }
    }
    return true;
}

int window_margin(const std::vector<SupportedVector>& basis, int K)
{
    std::int64_t extent = 0;
    for (const auto& b : basis) {
        for (const auto& [idx, c] : b.entries()) {
            const auto& sig = b.space().blocks[static_cast<std::size_t>(idx.block)];
            for (std::size_t co = 0; co < idx.k.size(); ++co) {
                const std::int64_t k = idx.k[co];
                extent = std::max(extent, sig.coords[co] == CoordKind::HalfLine ? k : std::max(k, -k - 1));
            }
        }
    }
    return static_cast<int>(K - 1 - extent);
}

// Exact entries forming a generalized permutation become one.
InternalOperator simplify(int d, const std::vector<Scalar>& entries)
{
    std::vector<int> perm(static_cast<std::size_t>(d), -1);
    std::vector<Phase> phases(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
            const Scalar& v = entries[static_cast<std::size_t>(r * d + c)];
            if (v.is_zero()) continue;
            if (perm[static_cast<std::size_t>(c)] != -1 || !v.is_exact() || v.terms().size() != 1)
                return InternalOperator::dense(d, entries);
            const auto& term = v.terms().front();
            Rational turn = term.turn;
            if (term.coef == Rational(-1)) turn += Rational(1, 2);
            else if (term.coef != Rational(1)) return InternalOperator::dense(d, entries);
            perm[static_cast<std::size_t>(c)] = r;
            phases[static_cast<std::size_t>(c)] = Phase::exact(turn);
        }
        if (perm[static_cast<std::size_t>(c)] == -1) return InternalOperator::dense(d, entries);
    }
    try {
        return InternalOperator::permutation(perm, phases);
    } catch (const Error&) {
        return InternalOperator::dense(d, entries);
    }
}

WanderingBasis basis_from(const Engine& eng, const IndexSet& A, const Window& win, const WoldConfig& cfg)
{
    WanderingBasis wb;
    std::vector<SupportedVector> candidates;
    for (const auto& idx : win.basis()) {
        SupportedVector q = eng.defect_product(A, SupportedVector::basis(win.space(), idx));
        if (q.is_zero()) continue;
        ProjectionResult p = eng.sector(A, q);
        wb.converged = wb.converged && p.converged;
        if (!p.value.is_zero()) candidates.push_back(std::move(p.value));
    }
    bool all_exact = std::all_of(candidates.begin(), candidates.end(), [](const auto& v) { return v.is_exact(); });
    wb.exact = all_exact && orthonormalize(candidates, true, cfg.rank_tol, wb.vectors);
    if (!wb.exact) orthonormalize(candidates, false, cfg.rank_tol, wb.vectors);
    return wb;
}

Extraction extract(const Engine& eng, const IndexSet& A, const WanderingBasis& wb, const WoldConfig& cfg)
{
    const IsometryTuple& t = eng.tuple();
    const IndexSet Ac = complement(A, t.n());
    const auto& B = wb.vectors;
    const int d = static_cast<int>(B.size());
    Extraction ex;
    ex.data.A = A;
    ex.data.dim_W = d;
    ex.converged = wb.converged;
    ex.exact = wb.exact;
    ex.window_margin = d == 0 ? cfg.K - 1 : window_margin(B, cfg.K);
    if (d > 0) {
        const double root_d = std::sqrt(static_cast<double>(d));
        for (int j : Ac) {
            std::vector<SupportedVector> images;
            for (const auto& b : B) images.push_back(eng.V(j, b));
            std::vector<Scalar> M(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    M[static_cast<std::size_t>(r * d + c)] = inner(B[static_cast<std::size_t>(r)], images[static_cast<std::size_t>(c)]);
            // Unitarity defect of M.
            double unit2 = 0.0;
            for (int r = 0; r < d; ++r) {
                for (int c = 0; c < d; ++c) {
                    Scalar g = r == c ? Scalar(-1) : Scalar();
                    for (int s = 0; s < d; ++s)
                        g += M[static_cast<std::size_t>(s * d + r)].conj() * M[static_cast<std::size_t>(s * d + c)];
                    if (!g.is_zero()) unit2 += std::norm(g.value());
                }
            }
            // Invariance defect V_j B - B M.
            double inv2 = 0.0;
            for (int c = 0; c < d; ++c) {
                SupportedVector diff = images[static_cast<std::size_t>(c)];
                for (int r = 0; r < d; ++r) diff -= B[static_cast<std::size_t>(r)].scaled(M[static_cast<std::size_t>(r * d + c)]);
                if (!diff.is_zero()) inv2 += diff.norm() * diff.norm();
            }
            ex.residual = std::max(ex.residual, (std::sqrt(unit2) + std::sqrt(inv2)) / root_d);
            ex.data.unitaries.push_back(simplify(d, M));
        }
    }
    ex.reliable = ex.converged && ex.residual <= cfg.reliable_residual && ex.window_margin >= 1;
    return ex;
}

SupportedVector phi_with(const Engine& eng, const IndexSet& A, const std::vector<SupportedVector>& basis,
                         const SupportedVector& y)
{
    const Space& target = eng.tuple().space();
    SupportedVector out(target);
    for (const auto& [idx, c] : y.entries()) {
        SupportedVector v = basis.at(static_cast<std::size_t>(idx.internal));
        for (std::size_t r = A.size(); r-- > 0;)
            for (std::int64_t p = 0; p < idx.k[r]; ++p) v = eng.V(A[r], v);
        out += v.scaled(c);
    }
    return out;
}

double reconstruction_residual(const Engine& eng, const IndexSet& A, const WanderingBasis& wb, const IsometryTuple& model, int K)
{
    double worst = 0.0;
    Window win(model.space(), K);
    for (const auto& idx : win.basis()) {
        SupportedVector y = SupportedVector::basis(model.space(), idx);
        SupportedVector phi_y = phi_with(eng, A, wb.vectors, y);
        for (int i = 1; i <= model.n(); ++i) {
            SupportedVector lhs = phi_with(eng, A, wb.vectors, op_apply(model.ops[static_cast<std::size_t>(i - 1)], y));
            SupportedVector d = lhs - eng.V(i, phi_y);
            if (!d.is_zero()) worst = std::max(worst, d.norm());
        }
    }
    return worst;
}

int window_rank(const std::vector<SupportedVector>& columns, const Window& win)
{
    std::vector<Eigen::VectorXcd> cols;
    for (const auto& c : columns)
        if (!c.is_zero()) cols.push_back(win.restrict(c));
    if (cols.empty()) return 0;
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(win.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
    qr.setThreshold(1e-8);
    return static_cast<int>(qr.rank());
}

} // namespace

std::vector<IndexSet> all_subsets(int n)
{
    std::vector<IndexSet> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        IndexSet A;
        for (int i = 1; i <= n; ++i)
            if (mask & (1u << (i - 1))) A.push_back(i);
        out.push_back(std::move(A));
    }
    return out;
}

ProjectionResult defect_projection_apply(int i, const IsometryTuple& t, const SupportedVector& x, int k_max)
{
    Split s = Engine(t, k_max).split(i, x);
    return {std::move(s.iso), s.converged, s.iterations};
}

ProjectionResult unitary_projection_apply(int i, const IsometryTuple& t, const SupportedVector& x, int k_max)
{
    Split s = Engine(t, k_max).split(i, x);
    return {std::move(s.uni), s.converged, s.iterations};
}

ProjectionResult sector_projection_apply(const IndexSet& A, const IsometryTuple& t, const SupportedVector& x, int k_max)
{
    return Engine(t, k_max).sector(A, x);
}

SupportedVector defect_product_apply(const IndexSet& A, const IsometryTuple& t, const SupportedVector& x)
{
    return Engine(t, 1).defect_product(A, x);
}

WanderingBasis wandering_basis(const IndexSet& A, const IsometryTuple& t, const WoldConfig& cfg)
{
    Engine eng(t, cfg.k_max);
    return basis_from(eng, A, Window(t.space(), cfg.K), cfg);
}

Extraction extract_from_basis(const IndexSet& A, const IsometryTuple& t, const WanderingBasis& basis, const WoldConfig& cfg)
{
    return extract(Engine(t, cfg.k_max), A, basis, cfg);
}

Extraction extract_wandering_data(const IndexSet& A, const IsometryTuple& t, const WoldConfig& cfg)
{
    Engine eng(t, cfg.k_max);
    return extract(eng, A, basis_from(eng, A, Window(t.space(), cfg.K), cfg), cfg);
}

std::vector<SectorDimension> classify_sectors(const IsometryTuple& t, const WoldConfig& cfg)
{
    Engine eng(t, cfg.k_max);
    Window win(t.space(), cfg.K);
    std::vector<SectorDimension> out;
    for (const auto& A : all_subsets(t.n())) {
        SectorDimension sd{A, 0, true};
        std::vector<SupportedVector> cols;
        for (const auto& idx : win.basis()) {
            ProjectionResult p = eng.sector(A, SupportedVector::basis(t.space(), idx));
            sd.converged = sd.converged && p.converged;
            cols.push_back(std::move(p.value));
        }
        sd.window_dim = window_rank(cols, win);
        out.push_back(std::move(sd));
    }
    return out;
}

SupportedVector phi_apply(const IndexSet& A, const IsometryTuple& t, const std::vector<SupportedVector>& basis,
                          const SupportedVector& y)
{
    return phi_with(Engine(t, 1), A, basis, y);
}

WoldReport wold_decompose(const IsometryTuple& t, const WoldConfig& cfg)
{
    Engine eng(t, cfg.k_max);
    Window win(t.space(), cfg.K);
    WoldReport rep;
    rep.K = cfg.K;
    rep.window_dim = static_cast<int>(win.size());
    const auto subsets = all_subsets(t.n());

    // P_A on every window basis vector.
    std::vector<std::vector<SupportedVector>> cols(subsets.size());
    std::vector<bool> converged(subsets.size(), true);
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        for (const auto& idx : win.basis()) {
            ProjectionResult p = eng.sector(subsets[a], SupportedVector::basis(t.space(), idx));
            converged[a] = converged[a] && p.converged;
            cols[a].push_back(std::move(p.value));
        }
    }

    for (std::size_t x = 0; x < win.size(); ++x) {
        SupportedVector total(t.space());
        for (std::size_t a = 0; a < subsets.size(); ++a) total += cols[a][x];
        SupportedVector d = total - SupportedVector::basis(t.space(), win.at(x));
        if (!d.is_zero()) rep.completeness_residual = std::max(rep.completeness_residual, d.norm());
        for (std::size_t b = 0; b < subsets.size(); ++b) {
            if (cols[b][x].is_zero()) continue;
            for (std::size_t a = 0; a < subsets.size(); ++a) {
                if (a == b) continue;
                ProjectionResult p = eng.sector(subsets[a], cols[b][x]);
                converged[a] = converged[a] && p.converged;
                if (!p.value.is_zero()) rep.orthogonality_residual = std::max(rep.orthogonality_residual, p.value.norm());
            }
        }
    }

    for (std::size_t a = 0; a < subsets.size(); ++a) {
        const IndexSet& A = subsets[a];
        SectorReport sr;
        sr.A = A;
        sr.window_dim_H_A = window_rank(cols[a], win);
        WanderingBasis wb = basis_from(eng, A, win, cfg);
        Extraction ex = extract(eng, A, wb, cfg);
        sr.wandering_dim = ex.data.dim_W;
        sr.wandering_data = ex.data;
        sr.extraction_residual = ex.residual;
        sr.window_margin = ex.window_margin;
        sr.exact = ex.exact;
        sr.converged = converged[a] && ex.converged;
        sr.reliable = ex.reliable && sr.converged;
        if (sr.wandering_dim > 0) {
            if (!sr.reliable) {
                sr.note = "window too small for reliable wandering data; reconstruction skipped";
            } else {
                try {
                    IsometryTuple model = make_standard_tuple(t.zc, ex.data, cfg.reliable_residual);
                    sr.reconstruction_residual = reconstruction_residual(eng, A, wb, model, cfg.K);
                } catch (const Error& e) {
                    sr.reliable = false;
                    sr.note = std::string("extracted data rejected: ") + e.what();
                }
            }
        }
        rep.converged = rep.converged && sr.converged;
        rep.sectors.push_back(std::move(sr));
    }
    return rep;
}

} // namespace dnc
