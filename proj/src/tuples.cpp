#include "dnc/tuples.hpp"

#include <algorithm>
#include <map>

#include "dnc/error.hpp"

namespace dnc {

namespace {

IndexSet checked_set(const IndexSet& A, int n)
{
    IndexSet s = A;
    std::sort(s.begin(), s.end());
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 1 || s[k] > n) throw Error("index " + std::to_string(s[k]) + " outside 1.." + std::to_string(n));
        if (k > 0 && s[k] == s[k - 1]) throw Error("index " + std::to_string(s[k]) + " listed twice");
    }
    return s;
}

double frobenius(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.norm(); }

// Operators of the standard model on l^2(N0^{|A|}) (x) W, where W is either
// C^d carrying the given unitaries or l^2(Z^{|A^c|}) carrying the torus
// generators.
std::vector<StructuredOperator> sector_operators(const StructureConstants& zc, const IndexSet& A, bool torus,
                                                 const std::vector<InternalOperator>& unitaries, int d)
{
    const int n = zc.n();
    const IndexSet Ac = complement(A, n);
    LatticeSignature sig;
    sig.coords.assign(A.size(), CoordKind::HalfLine);
    if (torus) sig.coords.insert(sig.coords.end(), Ac.size(), CoordKind::Line);
    sig.internal_dim = d;

    std::map<int, std::size_t> coord;
    for (std::size_t r = 0; r < A.size(); ++r) coord[A[r]] = r;
    if (torus)
        for (std::size_t r = 0; r < Ac.size(); ++r) coord[Ac[r]] = A.size() + r;

    std::vector<StructuredOperator> ops;
    for (int i = 1; i <= n; ++i) {
        const bool pure = std::binary_search(A.begin(), A.end(), i);
        OpTerm t{Scalar(1), std::vector<BandShiftFactor>(sig.coords.size()), InternalOperator::identity(d)};
        if (pure) {
            for (int ip : A)
                if (ip < i) t.factors[coord[ip]].w = zc.z(i, ip);
            t.factors[coord[i]].shift = 1;
        } else {
            for (int ip : A) t.factors[coord[ip]].w = zc.z(i, ip);
            if (torus) {
                for (int ip : Ac)
                    if (ip < i) t.factors[coord[ip]].w = zc.z(i, ip);
                t.factors[coord[i]].shift = 1;
            } else {
                auto r = static_cast<std::size_t>(std::lower_bound(Ac.begin(), Ac.end(), i) - Ac.begin());
                t.internal = unitaries[r];
            }
        }
        ops.push_back(StructuredOperator::from_terms(sig, {t}));
    }
    return ops;
}

IsometryTuple empty_tuple(const StructureConstants& zc)
{
    IsometryTuple t;
    t.zc = zc;
    t.ops.assign(static_cast<std::size_t>(zc.n()), StructuredOperator(Space{}));
    t.kind = TupleKind::Standard;
    return t;
}

} // namespace

IndexSet complement(const IndexSet& A, int n)
{
    IndexSet out;
    for (int i = 1; i <= n; ++i)
        if (std::find(A.begin(), A.end(), i) == A.end()) out.push_back(i);
    return out;
}

std::string index_set_to_string(const IndexSet& A)
{
    std::string out = "{";
    for (std::size_t k = 0; k < A.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(A[k]);
    }
    return out + "}";
}

TorusFormReport check_torus_relations(const StructureConstants& zc, const WanderingData& data)
{
    TorusFormReport rep;
    const IndexSet Ac = complement(data.A, zc.n());
    std::vector<Eigen::MatrixXcd> U;
    for (const auto& u : data.unitaries) U.push_back(u.matrix());
    for (const auto& u : U) {
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
        rep.unitarity = std::max(rep.unitarity, frobenius(u.adjoint() * u - id));
    }
    for (std::size_t r = 0; r < U.size(); ++r) {
        for (std::size_t s = 0; s < U.size(); ++s) {
            if (r == s) continue;
            const std::complex<double> zbar = zc.z(Ac[r], Ac[s]).conj().as_complex();
            const Eigen::MatrixXcd lhs = U[r].adjoint() * U[s];
            const double unstarred = frobenius(lhs - zbar * U[s] * U[r].adjoint());
            const double starred = frobenius(lhs - zbar * U[s].adjoint() * U[r]);
            if (unstarred > rep.unstarred_form) {
                rep.unstarred_form = unstarred;
                rep.worst_i = Ac[r];
                rep.worst_j = Ac[s];
            }
            rep.starred_form = std::max(rep.starred_form, starred);
        }
    }
    return rep;
}

void validate_wandering_data(const StructureConstants& zc, const WanderingData& data, double tol)
{
    const IndexSet A = checked_set(data.A, zc.n());
    const IndexSet Ac = complement(A, zc.n());
    if (data.dim_W < 0) throw Error("wandering data: negative dimension");
    if (data.dim_W == 0) return;
    if (data.unitaries.size() != Ac.size())
        throw Error("wandering data for A = " + index_set_to_string(A) + " need " + std::to_string(Ac.size())
                    + " unitaries (one per index outside A), got " + std::to_string(data.unitaries.size()));
    for (std::size_t r = 0; r < Ac.size(); ++r)
        if (data.unitaries[r].dim() != data.dim_W)
            throw Error("wandering data: unitary for index " + std::to_string(Ac[r]) + " has dimension "
                        + std::to_string(data.unitaries[r].dim()) + ", expected " + std::to_string(data.dim_W));
    TorusFormReport rep = check_torus_relations(zc, {A, data.dim_W, data.unitaries});
    if (rep.unitarity > tol) throw Error("wandering data: a listed operator is not unitary (residual " + std::to_string(rep.unitarity) + ")");
    if (rep.unstarred_form > tol) {
        std::string msg = "wandering data violate U_i* U_j = conj(z_ij) U_j U_i* for (i, j) = ("
            + std::to_string(rep.worst_i) + ", " + std::to_string(rep.worst_j) + "), residual "
            + std::to_string(rep.unstarred_form);
        if (rep.starred_form <= tol) msg += "; the variant U_i* U_j = conj(z_ij) U_j* U_i holds instead";
        throw StructureMismatch(rep.worst_i, rep.worst_j, msg);
    }
}

IsometryTuple make_standard_tuple(const StructureConstants& zc, const WanderingData& data, double tol)
{
    validate_wandering_data(zc, data, tol);
    if (data.dim_W == 0) return empty_tuple(zc);
    WanderingData d = data;
    d.A = checked_set(data.A, zc.n());
    IsometryTuple t;
    t.zc = zc;
    t.ops = sector_operators(zc, d.A, false, d.unitaries, d.dim_W);
    t.kind = TupleKind::Standard;
    t.sectors.push_back({SectorModel::Kind::Finite, d.A, d});
    return t;
}

IsometryTuple make_torus_sector(const StructureConstants& zc, const IndexSet& A)
{
    IsometryTuple t;
    t.zc = zc;
    const IndexSet s = checked_set(A, zc.n());
    t.ops = sector_operators(zc, s, true, {}, 1);
    t.kind = TupleKind::Standard;
    t.sectors.push_back({SectorModel::Kind::Torus, s, {}});
    return t;
}

std::vector<StructuredOperator> make_torus_generators(int m, const StructureConstants& zc_m)
{
    if (m < 0) throw Error("torus rank must be non-negative");
    if (m != zc_m.n()) throw Error("torus rank differs from the number of structure constants");
    if (m == 0) return {};
    return sector_operators(zc_m, {}, true, {}, 1);
}

WanderingData make_clock_shift_data(const IndexSet& A, int d, const StructureConstants& zc, const Phase& lambda)
{
    const IndexSet s = checked_set(A, zc.n());
    const IndexSet Ac = complement(s, zc.n());
    if (d < 1) throw Error("clock-shift data need d >= 1");
    if (Ac.size() > 2) throw Error("clock-shift data support at most two unitaries, A^c has " + std::to_string(Ac.size()));
    WanderingData data{s, d, {}};
    std::vector<int> cyc(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) cyc[static_cast<std::size_t>(m)] = (m + 1) % d;
    if (Ac.size() == 1) {
        data.unitaries.push_back(InternalOperator::permutation(cyc, std::vector<Phase>(static_cast<std::size_t>(d), lambda)));
    } else if (Ac.size() == 2) {
        const Phase zeta = zc.z(Ac[0], Ac[1]);
        if (!zeta.is_exact()) throw Error("clock-shift data need an exact structure constant");
        const std::int64_t q = zeta.turns().den();
        if (d % q != 0)
            throw Error("clock-shift data for z = " + zeta.to_string() + " need d divisible by " + std::to_string(q)
                        + " (got d = " + std::to_string(d) + ")");
        std::vector<int> id(static_cast<std::size_t>(d));
        std::vector<Phase> diag(static_cast<std::size_t>(d));
        for (int m = 0; m < d; ++m) {
            id[static_cast<std::size_t>(m)] = m;
            diag[static_cast<std::size_t>(m)] = zeta.pow(m);
        }
        data.unitaries.push_back(InternalOperator::permutation(id, diag));
        data.unitaries.push_back(InternalOperator::permutation(cyc, {}));
    }
    return data;
}

IsometryTuple tuple_direct_sum(const std::vector<IsometryTuple>& parts)
{
    if (parts.empty()) throw Error("direct sum of no tuples");
    if (parts.size() == 1) return parts.front();
    const StructureConstants& zc = parts.front().zc;
    for (const auto& p : parts) {
        if (p.zc.n() != zc.n())
            throw Error("direct sum: tuples have different sizes (" + std::to_string(zc.n()) + " vs " + std::to_string(p.zc.n()) + ")");
        auto [i, j] = zc.first_difference(p.zc);
        if (i != 0)
            throw StructureMismatch(i, j, "structure constants differ at (" + std::to_string(i) + ", " + std::to_string(j)
                                              + "): " + zc.z(i, j).to_string() + " vs " + p.zc.z(i, j).to_string()
                                              + "; unitarily equivalent tuples must share all structure constants");
    }
    IsometryTuple out;
    out.zc = zc;
    out.kind = TupleKind::DirectSum;
    bool all_standard = true;
    for (const auto& p : parts) {
        if (p.space().blocks.empty()) continue;
        all_standard = all_standard && p.is_standard_sum();
        out.sectors.insert(out.sectors.end(), p.sectors.begin(), p.sectors.end());
    }
    if (!all_standard) out.sectors.clear();
    for (int i = 0; i < zc.n(); ++i) {
        std::vector<StructuredOperator> blocks;
        for (const auto& p : parts) blocks.push_back(p.ops[static_cast<std::size_t>(i)]);
        out.ops.push_back(StructuredOperator::block_diagonal(blocks));
    }
    return out;
}

SupportedVector Dilation::embed(const SupportedVector& x) const
{
    if (!(x.space() == original)) throw Error("dilation embed: vector does not live on the original space");
    SupportedVector y(dilated.space());
    for (const auto& [idx, c] : x.entries()) y.add(idx, c);
    return y;
}

SupportedVector Dilation::compress(const SupportedVector& y) const
{
    if (!(y.space() == dilated.space())) throw Error("dilation compress: vector does not live on the dilated space");
    SupportedVector x(original);
    for (const auto& [idx, c] : y.entries()) {
        const auto& sig = original.blocks[static_cast<std::size_t>(idx.block)];
        bool inside = true;
        for (std::size_t co = 0; co < idx.k.size(); ++co)
            inside = inside && !(sig.coords[co] == CoordKind::HalfLine && idx.k[co] < 0);
        if (inside) x.add(idx, c);
    }
    return x;
}

Dilation dilate_tuple(const IsometryTuple& t)
{
    if (!t.space().blocks.empty() && !t.is_standard_sum())
        throw Error("dilation needs a standard tuple (or a direct sum of standard tuples); run decompose first");
    Dilation out;
    out.original = t.space();
    Space big;
    for (auto sig : t.space().blocks) {
        std::fill(sig.coords.begin(), sig.coords.end(), CoordKind::Line);
        big.blocks.push_back(sig);
    }
    out.dilated.zc = t.zc;
    out.dilated.kind = TupleKind::Dilation;
    for (const auto& op : t.ops) {
        StructuredOperator u(big);
        for (std::size_t b = 0; b < op.blocks().size(); ++b)
            for (auto term : op.blocks()[b]) u.add_term(static_cast<int>(b), std::move(term));
        out.dilated.ops.push_back(std::move(u));
    }
    return out;
}

RelationReport verify_tuple_relations(const IsometryTuple& t, int K, double tol)
{
    RelationReport rep;
    rep.tol = tol;
    const int n = t.n();
    const Space& space = t.space();
    std::vector<StructuredOperator> adj;
    for (const auto& v : t.ops) adj.push_back(op_adjoint(v));
    auto record = [&](std::string name, int i, int j, double r) {
        rep.entries.push_back({std::move(name), i, j, r});
        rep.max_residual = std::max(rep.max_residual, r);
    };
    const StructuredOperator one = StructuredOperator::identity(space);
    auto V = [&](int i) -> const StructuredOperator& { return t.ops[static_cast<std::size_t>(i - 1)]; };
    auto Vs = [&](int i) -> const StructuredOperator& { return adj[static_cast<std::size_t>(i - 1)]; };
    for (int i = 1; i <= n; ++i) {
        const std::string s = std::to_string(i);
        record("V" + s + "* V" + s + " = 1", i, i, op_equal_on_window(op_compose(Vs(i), V(i)), one, K));
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const std::string si = std::to_string(i), sj = std::to_string(j);
            const Scalar z(t.zc.z(i, j));
            const Scalar zbar(t.zc.z(i, j).conj());
            record("V" + si + "* V" + sj + " = conj(z" + si + sj + ") V" + sj + " V" + si + "*", i, j,
                   op_equal_on_window(op_compose(Vs(i), V(j)), op_compose(V(j), Vs(i)).scaled(zbar), K));
            record("V" + si + " V" + sj + " = z" + si + sj + " V" + sj + " V" + si, i, j,
                   op_equal_on_window(op_compose(V(i), V(j)), op_compose(V(j), V(i)).scaled(z), K));
            record("V" + sj + "* V" + si + "* = conj(z" + si + sj + ") V" + si + "* V" + sj + "*", i, j,
                   op_equal_on_window(op_compose(Vs(j), Vs(i)), op_compose(Vs(i), Vs(j)).scaled(zbar), K));
        }
    }
    return rep;
}

} // namespace dnc
