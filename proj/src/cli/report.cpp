#include "dnc/cli/report.hpp"

#include <cmath>

namespace dnc::cli {

double clean(double x)
{
    return std::abs(x) < 1e-15 ? 0.0 : x;
}

ojson to_json(const Phase& p)
{
    if (p.is_exact()) return ojson{{"num", p.turns().num()}, {"den", p.turns().den()}};
    return ojson{{"rad", p.angle()}};
}

ojson to_json(std::complex<double> c)
{
    return ojson::array({clean(c.real()), clean(c.imag())});
}

ojson to_json(const Scalar& s)
{
    if (!s.is_exact()) return to_json(s.value());
    return s.to_string();
}

ojson to_json(const Eigen::MatrixXcd& m)
{
    ojson rows = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ojson row = ojson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

ojson to_json(const InternalOperator& op)
{
    using Kind = InternalOperator::Kind;
    ojson j;
    switch (op.kind()) {
    case Kind::Identity:
        j["identity"] = op.dim();
        break;
    case Kind::GeneralizedPermutation: {
        j["perm"] = op.perm();
        ojson ph = ojson::array();
        for (const auto& p : op.phases()) ph.push_back(to_json(p));
        j["phases"] = ph;
        break;
    }
    case Kind::Dense: {
        ojson rows = ojson::array();
        for (int r = 0; r < op.dim(); ++r) {
            ojson row = ojson::array();
            for (int c = 0; c < op.dim(); ++c) row.push_back(to_json(op.entry(r, c)));
            rows.push_back(row);
        }
        j["dense"] = rows;
        break;
    }
    }
    return j;
}

ojson to_json(const WanderingData& d)
{
    ojson j;
    j["A"] = d.A;
    j["dim_W"] = d.dim_W;
    ojson us = ojson::array();
    const IndexSet Ac = complement(d.A, static_cast<int>(d.A.size() + d.unitaries.size()));
    for (std::size_t k = 0; k < d.unitaries.size(); ++k) {
        ojson u = to_json(d.unitaries[k]);
        u["index"] = Ac[k];
        us.push_back(u);
    }
    j["unitaries"] = us;
    return j;
}

ojson to_json(const StructuredOperator& op)
{
    ojson blocks = ojson::array();
    for (std::size_t b = 0; b < op.blocks().size(); ++b) {
        const auto& sig = op.space().blocks[b];
        ojson terms = ojson::array();
        for (const auto& t : op.blocks()[b]) {
            ojson tj;
            tj["coef"] = to_json(t.coef);
            ojson fs = ojson::array();
            for (std::size_t c = 0; c < t.factors.size(); ++c) {
                ojson f{{"shift", t.factors[c].shift}};
                if (sig.coords[c] == CoordKind::HalfLine) f["threshold"] = t.factors[c].threshold;
                f["w"] = to_json(t.factors[c].w);
                fs.push_back(f);
            }
            tj["factors"] = fs;
            tj["internal"] = to_json(t.internal);
            terms.push_back(tj);
        }
        blocks.push_back(ojson{{"space", sig.to_string()}, {"terms", terms}});
    }
    return blocks;
}

ojson to_json(const StructureConstants& zc)
{
    ojson j;
    j["n"] = zc.n();
    ojson zs = ojson::array();
    for (int i = 1; i <= zc.n(); ++i)
        for (int k = i + 1; k <= zc.n(); ++k)
            zs.push_back(ojson{{"i", i}, {"j", k}, {"phase", to_json(zc.z(i, k))}, {"text", zc.z(i, k).to_string()}});
    j["z"] = zs;
    return j;
}

ojson to_json(const RelationReport& r)
{
    ojson j;
    j["ok"] = r.ok();
    j["max_residual"] = r.max_residual;
    j["tol"] = r.tol;
    ojson es = ojson::array();
    for (const auto& e : r.entries)
        es.push_back(ojson{{"relation", e.relation}, {"i", e.i}, {"j", e.j}, {"residual", e.residual}});
    j["entries"] = es;
    return j;
}

ojson to_json(const TorusFormReport& r)
{
    return ojson{{"unitarity_residual", r.unitarity},
                 {"unstarred_form_residual", r.unstarred_form},
                 {"starred_form_residual", r.starred_form}};
}

ojson to_json(const SectorReport& s)
{
    ojson j;
    j["A"] = s.A;
    j["window_dim_H_A"] = s.window_dim_H_A;
    j["wandering_dim"] = s.wandering_dim;
    j["wandering_data"] = to_json(s.wandering_data);
    j["extraction_residual"] = s.extraction_residual;
    j["window_margin"] = s.window_margin;
    j["reliable"] = s.reliable;
    j["exact"] = s.exact;
    j["converged"] = s.converged;
    j["reconstruction_residual"] = s.reconstruction_residual ? ojson(*s.reconstruction_residual) : ojson(nullptr);
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

ojson to_json(const WoldReport& r)
{
    ojson j;
    j["K"] = r.K;
    j["window_dim"] = r.window_dim;
    j["completeness_residual"] = r.completeness_residual;
    j["orthogonality_residual"] = r.orthogonality_residual;
    j["converged"] = r.converged;
    ojson ss = ojson::array();
    for (const auto& s : r.sectors) ss.push_back(to_json(s));
    j["sectors"] = ss;
    return j;
}

ojson to_json(const EquivalenceVerdict& v)
{
    ojson j;
    j["verdict"] = verdict_name(v.kind);
    switch (v.kind) {
    case EquivalenceVerdict::Kind::Equivalent:
        if (v.witness.size() > 0) {
            j["witness"] = to_json(v.witness);
            j["witness_unitarity_residual"] = v.witness_unitarity;
            j["witness_intertwining_residual"] = v.witness_intertwining;
        }
        break;
    case EquivalenceVerdict::Kind::Inequivalent:
        j["certificate"] = v.certificate;
        if (v.certificate == "trace") {
            j["word"] = v.word;
            j["trace_first"] = to_json(v.trace1);
            j["trace_second"] = to_json(v.trace2);
        } else {
            j["detail"] = v.reason;
        }
        break;
    case EquivalenceVerdict::Kind::Undecided:
        j["reason"] = v.reason;
        break;
    }
    j["word_bound"] = v.word_bound;
    j["words_compared"] = v.words_compared;
    if (v.intertwiner_dim >= 0) j["intertwiner_dim"] = v.intertwiner_dim;
    j["seed"] = v.seed;
    return j;
}

ojson to_json(const Fingerprint& f)
{
    ojson j;
    j["partial"] = f.partial;
    ojson ss = ojson::array();
    for (const auto& s : f.sectors) {
        ojson sj{{"A", s.A}, {"dim", s.dim}, {"reliable", s.reliable}};
        if (s.word_bound > 0) {
            sj["word_bound"] = s.word_bound;
            ojson ts = ojson::array();
            for (const auto& [w, t] : s.traces) ts.push_back(ojson{{"word", w}, {"trace", to_json(t)}});
            sj["traces"] = ts;
        }
        ss.push_back(sj);
    }
    j["sectors"] = ss;
    return j;
}

ojson to_json(const Config& c)
{
    ojson j;
    j["K"] = c.K;
    j["k_max"] = c.k_max;
    j["tol"] = c.tol;
    j["rank_tol"] = c.rank_tol;
    j["gram_schmidt_tol"] = 1e-10;
    j["reliable_residual"] = c.reliable_residual;
    j["witness_tol"] = c.witness_tol;
    j["word_bound"] = c.word_bound > 0 ? ojson(c.word_bound) : ojson("2*dim^2");
    j["seed"] = c.seed;
    return j;
}

} // namespace dnc::cli
