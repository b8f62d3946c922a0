#include "dnc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dnc/error.hpp"

namespace dnc {

namespace {

void require_compatible(const LabelledData& a, const LabelledData& b)
{
    if (a.zc.n() != b.zc.n()) throw Error("wandering data belong to tuples of different sizes");
    auto [i, j] = a.zc.first_difference(b.zc);
    if (i != 0)
        throw StructureMismatch(i, j, "structure constants differ at (" + std::to_string(i) + ", " + std::to_string(j)
                                          + "); unitarily equivalent tuples must share all structure constants");
    IndexSet A1 = a.data.A, A2 = b.data.A;
    std::sort(A1.begin(), A1.end());
    std::sort(A2.begin(), A2.end());
    if (A1 != A2)
        throw Error("wandering data for different index sets " + index_set_to_string(A1) + " and " + index_set_to_string(A2));
}

std::vector<Eigen::MatrixXcd> matrices(const WanderingData& d)
{
    std::vector<Eigen::MatrixXcd> out;
    for (const auto& u : d.unitaries) out.push_back(u.matrix());
    return out;
}

int default_word_bound(int dim) { return 2 * dim * dim; }

void enumerate_words(int m, int remaining, std::vector<int>& current, std::size_t pos, std::vector<std::vector<int>>& out)
{
    if (pos == static_cast<std::size_t>(m)) {
        if (remaining == 0) out.push_back(current);
        return;
    }
    for (int e = -remaining; e <= remaining; ++e) {
        current[pos] = e;
        enumerate_words(m, remaining - std::abs(e), current, pos + 1, out);
    }
    current[pos] = 0;
}

} // namespace

std::string verdict_name(EquivalenceVerdict::Kind k)
{
    switch (k) {
    case EquivalenceVerdict::Kind::Equivalent: return "Equivalent";
    case EquivalenceVerdict::Kind::Inequivalent: return "Inequivalent";
    case EquivalenceVerdict::Kind::Undecided: return "Undecided";
    }
    return "Undecided";
}

std::vector<Eigen::MatrixXcd> intertwiner_space(const LabelledData& d1, const LabelledData& d2, const ClassifyConfig& cfg)
{
    require_compatible(d1, d2);
    const int n1 = d1.data.dim_W;
    const int n2 = d2.data.dim_W;
    std::vector<Eigen::MatrixXcd> basis;
    if (n1 == 0 || n2 == 0) return basis;
    const auto U1 = matrices(d1.data);
    const auto U2 = matrices(d2.data);
    const Eigen::Index cols = static_cast<Eigen::Index>(n1) * n2;
    if (U1.empty()) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n2, n1);
            e(k % n2, k / n2) = 1.0;
            basis.push_back(e);
        }
        return basis;
    }
    // vec(X U) = (U^T (x) I) vec X and vec(U' X) = (I (x) U') vec X, column-major.
    const Eigen::Index block = cols;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(2 * U1.size()) * block, cols);
    const Eigen::MatrixXcd I1 = Eigen::MatrixXcd::Identity(n1, n1);
    const Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(n2, n2);
    auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c) k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        return k;
    };
    for (std::size_t j = 0; j < U1.size(); ++j) {
        const Eigen::MatrixXcd A1 = U1[j];
        const Eigen::MatrixXcd A1s = U1[j].adjoint();
        C.block(static_cast<Eigen::Index>(2 * j) * block, 0, block, cols) = kron(A1.transpose(), I2) - kron(I1, U2[j]);
        C.block(static_cast<Eigen::Index>(2 * j + 1) * block, 0, block, cols) =
            kron(A1s.transpose(), I2) - kron(I1, Eigen::MatrixXcd(U2[j].adjoint()));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) >= cfg.null_tol) ++rank;
    const Eigen::MatrixXcd& V = svd.matrixV();
    for (Eigen::Index k = rank; k < cols; ++k) {
        Eigen::MatrixXcd X(n2, n1);
        for (Eigen::Index c = 0; c < n1; ++c)
            for (Eigen::Index r = 0; r < n2; ++r) X(r, c) = V(c * n2 + r, k);
        basis.push_back(X);
    }
    return basis;
}

std::vector<std::vector<int>> trace_words(int m, int L)
{
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(m), 0);
    if (m == 0) {
        out.push_back({});
        return out;
    }
    for (int total = 0; total <= L; ++total) enumerate_words(m, total, current, 0, out);
    return out;
}

std::string word_to_string(const std::vector<int>& exps, const IndexSet& indices)
{
    std::string out;
    for (std::size_t k = 0; k < exps.size(); ++k) {
        if (exps[k] == 0) continue;
        if (!out.empty()) out += ' ';
        out += 'U' + std::to_string(indices[k]);
        if (exps[k] != 1) out += '^' + std::to_string(exps[k]);
    }
    return out.empty() ? "1" : out;
}

std::complex<double> word_trace(const std::vector<Eigen::MatrixXcd>& unitaries, const std::vector<int>& exps)
{
    if (unitaries.empty()) return {};
    const Eigen::Index d = unitaries.front().rows();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t k = 0; k < exps.size(); ++k) {
        const int e = exps[k];
        if (e == 0) continue;
        const Eigen::MatrixXcd base = e > 0 ? unitaries[k] : Eigen::MatrixXcd(unitaries[k].adjoint());
        for (int p = 0; p < std::abs(e); ++p) acc = acc * base;
    }
    return acc.trace();
}

EquivalenceVerdict equivalence_verdict(const LabelledData& d1, const LabelledData& d2, const ClassifyConfig& cfg)
{
    require_compatible(d1, d2);
    EquivalenceVerdict v;
    v.seed = cfg.seed;
    const int n1 = d1.data.dim_W;
    const int n2 = d2.data.dim_W;
    if (n1 != n2) {
        v.kind = EquivalenceVerdict::Kind::Inequivalent;
        v.certificate = "dimension";
        v.reason = "dim W = " + std::to_string(n1) + " vs " + std::to_string(n2);
        return v;
    }
    if (n1 == 0) {
        v.kind = EquivalenceVerdict::Kind::Equivalent;
        return v;
    }
    const auto U1 = matrices(d1.data);
    const auto U2 = matrices(d2.data);
    const IndexSet Ac = complement(d1.data.A, d1.zc.n());
    v.word_bound = cfg.word_bound > 0 ? cfg.word_bound : default_word_bound(n1);

    // Powers are cached per generator; every word is a product of them.
    const int L = v.word_bound;
    auto powers = [L](const std::vector<Eigen::MatrixXcd>& U) {
        std::vector<std::vector<Eigen::MatrixXcd>> p(U.size());
        for (std::size_t j = 0; j < U.size(); ++j) {
            const Eigen::Index d = U[j].rows();
            p[j].assign(static_cast<std::size_t>(2 * L + 1), Eigen::MatrixXcd::Identity(d, d));
            const Eigen::MatrixXcd Us = U[j].adjoint();
            for (int e = 1; e <= L; ++e) {
                p[j][static_cast<std::size_t>(L + e)] = p[j][static_cast<std::size_t>(L + e - 1)] * U[j];
                p[j][static_cast<std::size_t>(L - e)] = p[j][static_cast<std::size_t>(L - e + 1)] * Us;
            }
        }
        return p;
    };
    const auto P1 = powers(U1);
    const auto P2 = powers(U2);
    for (const auto& w : trace_words(static_cast<int>(U1.size()), L)) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n1, n1);
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(n2, n2);
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] == 0) continue;
            a = a * P1[j][static_cast<std::size_t>(L + w[j])];
            b = b * P2[j][static_cast<std::size_t>(L + w[j])];
        }
        ++v.words_compared;
        const std::complex<double> t1 = a.trace(), t2 = b.trace();
        if (std::abs(t1 - t2) > cfg.trace_tol) {
            v.kind = EquivalenceVerdict::Kind::Inequivalent;
            v.certificate = "trace";
            v.word = word_to_string(w, Ac);
            v.trace1 = t1;
            v.trace2 = t2;
            return v;
        }
    }

    const auto basis = intertwiner_space(d1, d2, cfg);
    v.intertwiner_dim = static_cast<int>(basis.size());
    if (basis.empty()) {
        v.reason = "traces agree up to the word bound but the intertwiner space is zero";
        return v;
    }
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n2, n1);
    for (const auto& B : basis) X += gauss(rng) * B;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd W = svd.matrixU() * svd.matrixV().adjoint();
    v.witness_unitarity = (W.adjoint() * W - Eigen::MatrixXcd::Identity(n1, n1)).norm();
    for (std::size_t j = 0; j < U1.size(); ++j)
        v.witness_intertwining = std::max(v.witness_intertwining, (W * U1[j] - U2[j] * W).norm());
    if (v.witness_unitarity < cfg.witness_tol && v.witness_intertwining < cfg.witness_tol) {
        v.kind = EquivalenceVerdict::Kind::Equivalent;
        v.witness = W;
    } else {
        v.reason = "polar part of a generic intertwiner failed verification (unitarity "
            + std::to_string(v.witness_unitarity) + ", intertwining " + std::to_string(v.witness_intertwining) + ")";
    }
    return v;
}

bool irreducibility_test(const LabelledData& d, const ClassifyConfig& cfg)
{
    if (d.data.dim_W < 1) throw Error("irreducibility of the zero representation is undefined");
    return intertwiner_space(d, d, cfg).size() == 1;
}

Fingerprint classification_fingerprint(const WoldReport& report, int L)
{
    Fingerprint fp;
    for (const auto& s : report.sectors) {
        SectorFingerprint sf;
        sf.A = s.A;
        sf.dim = s.wandering_dim;
        sf.reliable = s.reliable;
        if (!s.reliable) {
            fp.partial = true;
        } else if (s.wandering_dim > 0) {
            const auto U = matrices(s.wandering_data);
            const IndexSet Ac = complement(s.A, static_cast<int>(s.A.size() + U.size()));
            sf.word_bound = L > 0 ? L : default_word_bound(s.wandering_dim);
            for (const auto& w : trace_words(static_cast<int>(U.size()), sf.word_bound))
                sf.traces.emplace_back(word_to_string(w, Ac),
                                       U.empty() ? std::complex<double>(s.wandering_dim) : word_trace(U, w));
        }
        fp.sectors.push_back(std::move(sf));
    }
    return fp;
}

bool fingerprints_equal(const Fingerprint& a, const Fingerprint& b, double tol)
{
    if (a.sectors.size() != b.sectors.size()) return false;
    for (std::size_t k = 0; k < a.sectors.size(); ++k) {
        const auto& x = a.sectors[k];
        const auto& y = b.sectors[k];
        if (x.A != y.A || x.dim != y.dim || x.reliable != y.reliable || x.traces.size() != y.traces.size()) return false;
        for (std::size_t t = 0; t < x.traces.size(); ++t)
            if (x.traces[t].first != y.traces[t].first || std::abs(x.traces[t].second - y.traces[t].second) > tol) return false;
    }
    return true;
}

} // namespace dnc
