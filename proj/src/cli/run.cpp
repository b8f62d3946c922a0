#include "dnc/cli/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "dnc/cli/report.hpp"

namespace dnc::cli {

namespace {

std::string short_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Outcome {
    ojson result;
    int code = 0;
    std::string summary;
};

WoldConfig wold_config(const Config& cfg)
{
    WoldConfig w;
    w.K = cfg.K;
    w.k_max = cfg.k_max;
    w.reliable_residual = cfg.reliable_residual;
    return w;
}

ClassifyConfig classify_config(const Config& cfg)
{
    ClassifyConfig c;
    c.null_tol = cfg.rank_tol;
    c.witness_tol = cfg.witness_tol;
    c.word_bound = cfg.word_bound;
    c.seed = cfg.seed;
    return c;
}

FormalSum parse_field(const Document& doc, const std::string& key, const StructureConstants& zc)
{
    const std::string where = doc.path + ":/" + key;
    if (!doc.json.contains(key)) throw InputError(doc.path + ":", "missing key '" + key + "'");
    const auto& j = doc.json[key];
    if (!j.is_string()) throw InputError(where, "expected a string");
    try {
        return parse_expression(j.get<std::string>(), zc);
    } catch (const ParseError& e) {
        throw InputError(where, e.what());
    }
}

ojson sum_json(const FormalSum& s)
{
    ojson terms = ojson::array();
    for (const auto& [pattern, coef] : s.terms())
        terms.push_back(ojson{{"pattern", pattern_to_string(pattern)}, {"coefficient", to_json(coef)}});
    return ojson{{"normal_form", s.to_string()}, {"terms", terms}};
}

Outcome do_reduce(const Document& doc, const StructureConstants& zc)
{
    Outcome o;
    const FormalSum lhs = parse_field(doc, "expression", zc);
    o.result["expression"] = doc.json["expression"];
    o.result["reduced"] = sum_json(lhs);
    o.summary = lhs.to_string();
    if (doc.json.contains("rhs")) {
        const FormalSum rhs = parse_field(doc, "rhs", zc);
        const bool same = verify_identity(lhs, rhs);
        o.result["rhs"] = doc.json["rhs"];
        o.result["rhs_reduced"] = sum_json(rhs);
        o.result["identity_holds"] = same;
        o.summary += same ? "  (identity holds)" : "  (identity fails: rhs = " + rhs.to_string() + ")";
        o.code = same ? 0 : 1;
    }
    return o;
}

ojson sector_models_json(const IsometryTuple& t, double& worst)
{
    ojson arr = ojson::array();
    for (std::size_t b = 0; b < t.sectors.size(); ++b) {
        const auto& s = t.sectors[b];
        ojson j{{"block", b}, {"A", s.A}, {"space", t.space().blocks[b].to_string()}};
        if (s.kind == SectorModel::Kind::Torus) {
            j["wandering_space"] = "torus";
        } else {
            j["wandering_data"] = to_json(s.data);
            const TorusFormReport tf = check_torus_relations(t.zc, s.data);
            j["torus_relations"] = to_json(tf);
            worst = std::max({worst, tf.unitarity, tf.unstarred_form});
        }
        arr.push_back(j);
    }
    return arr;
}

Outcome do_verify(const IsometryTuple& t, const Config& cfg)
{
    Outcome o;
    const RelationReport rel = verify_tuple_relations(t, cfg.K, cfg.tol);
    o.result["relations"] = to_json(rel);
    double worst = rel.max_residual;
    if (t.is_standard_sum()) o.result["sectors"] = sector_models_json(t, worst);
    o.result["max_residual"] = worst;
    o.code = worst <= cfg.tol ? 0 : 1;
    o.summary = std::string(o.code == 0 ? "relations hold" : "relations fail") + ", max residual " + short_number(worst);
    return o;
}

Outcome do_standard(const IsometryTuple& t, const Config& cfg)
{
    Outcome o = do_verify(t, cfg);
    ojson ops = ojson::array();
    for (std::size_t i = 0; i < t.ops.size(); ++i) ops.push_back(ojson{{"index", i + 1}, {"blocks", to_json(t.ops[i])}});
    ojson result;
    result["space"] = t.space().to_string();
    result["operators"] = ops;
    for (auto& [k, v] : o.result.items()) result[k] = v;
    o.result = result;
    return o;
}

int wold_code(const WoldReport& r, const Config& cfg)
{
    if (!r.converged) return 1;
    if (r.completeness_residual > cfg.tol || r.orthogonality_residual > cfg.tol) return 1;
    for (const auto& s : r.sectors)
        if (s.reliable && s.reconstruction_residual && *s.reconstruction_residual > cfg.tol) return 1;
    return 0;
}

std::string wold_summary(const WoldReport& r)
{
    std::string s;
    for (const auto& sec : r.sectors) {
        if (sec.window_dim_H_A == 0) continue;
        if (!s.empty()) s += ", ";
        s += "A=" + index_set_to_string(sec.A) + ": dim W " + std::to_string(sec.wandering_dim);
        if (!sec.reliable) s += " (windowed)";
    }
    return s.empty() ? "no nonzero sectors" : s;
}

Outcome do_decompose(const IsometryTuple& t, const Config& cfg)
{
    Outcome o;
    const WoldReport r = wold_decompose(t, wold_config(cfg));
    o.result = to_json(r);
    o.code = wold_code(r, cfg);
    o.summary = wold_summary(r);
    return o;
}

Outcome do_classify(const IsometryTuple& t, const Config& cfg)
{
    Outcome o;
    const WoldReport r = wold_decompose(t, wold_config(cfg));
    o.result["decomposition"] = to_json(r);
    o.result["fingerprint"] = to_json(classification_fingerprint(r, cfg.word_bound));
    ojson irr = ojson::array();
    const ClassifyConfig cc = classify_config(cfg);
    for (const auto& s : r.sectors) {
        if (s.wandering_dim == 0) continue;
        ojson j{{"A", s.A}, {"dim_W", s.wandering_dim}};
        if (s.reliable) {
            const LabelledData d{t.zc, s.wandering_data};
            j["commutant_dim"] = intertwiner_space(d, d, cc).size();
            j["irreducible"] = irreducibility_test(d, cc);
        } else {
            j["irreducible"] = nullptr;
            j["note"] = "wandering data are a windowed compression";
        }
        irr.push_back(j);
    }
    o.result["irreducibility"] = irr;
    o.code = wold_code(r, cfg);
    o.summary = wold_summary(r);
    return o;
}

Document load_other(const JobSpec& spec, const Document& doc)
{
    if (!spec.other.empty()) return load_document(spec.other);
    const std::string where = doc.path + ":/job/other";
    if (!doc.json.contains("job") || !doc.json["job"].contains("other"))
        throw InputError(where, "equiv needs a second specification (--other or job.other)");
    const auto& j = doc.json["job"]["other"];
    if (!j.is_string()) throw InputError(where, "expected a path");
    std::filesystem::path p(j.get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(doc.path).parent_path() / p;
    return load_document(p.string());
}

Outcome do_equiv(const IsometryTuple& t1, const IsometryTuple& t2, const Config& cfg)
{
    Outcome o;
    const WoldConfig wc = wold_config(cfg);
    const WoldReport r1 = wold_decompose(t1, wc);
    const WoldReport r2 = wold_decompose(t2, wc);
    const ClassifyConfig cc = classify_config(cfg);
    ojson secs = ojson::array();
    bool all_equivalent = r1.converged && r2.converged;
    for (std::size_t k = 0; k < r1.sectors.size(); ++k) {
        const SectorReport& a = r1.sectors[k];
        const SectorReport& b = r2.sectors[k];
        ojson j{{"A", a.A}, {"dim_W_first", a.wandering_dim}, {"dim_W_second", b.wandering_dim}};
        if (a.wandering_dim == 0 && b.wandering_dim == 0) {
            j["verdict"] = "Equivalent";
            j["detail"] = "both sectors are zero";
        } else if (!a.reliable || !b.reliable) {
            j["verdict"] = "Undecided";
            j["reason"] = "wandering data are a windowed compression";
            all_equivalent = false;
        } else {
            const EquivalenceVerdict v = equivalence_verdict({t1.zc, a.wandering_data}, {t2.zc, b.wandering_data}, cc);
            const ojson vj = to_json(v);
            for (const auto& [key, val] : vj.items()) j[key] = val;
            all_equivalent = all_equivalent && v.kind == EquivalenceVerdict::Kind::Equivalent;
        }
        secs.push_back(j);
    }
    o.result["sectors"] = secs;
    o.result["converged"] = r1.converged && r2.converged;
    o.result["verdict"] = all_equivalent ? "Equivalent" : "NotEquivalent";
    o.code = all_equivalent ? 0 : 1;
    o.summary = all_equivalent ? "Equivalent" : "not certified equivalent";
    return o;
}

Outcome do_dilate(const IsometryTuple& t, const Config& cfg)
{
    Outcome o;
    const Dilation d = dilate_tuple(t);
    const RelationReport rel = verify_tuple_relations(d.dilated, cfg.K, cfg.tol);
    double worst = rel.max_residual;

    ojson unitarity = ojson::array();
    for (int i = 0; i < t.n(); ++i) {
        const StructuredOperator& U = d.dilated.ops[static_cast<std::size_t>(i)];
        const double r = op_equal_on_window(op_compose(U, op_adjoint(U)), StructuredOperator::identity(U.space()), cfg.K);
        unitarity.push_back(ojson{{"i", i + 1}, {"residual", r}});
        worst = std::max(worst, r);
    }

    const Window win(t.space(), cfg.K);
    double restriction = 0.0;
    double compression = 0.0;
    for (const BasisIndex& idx : win.basis()) {
        const SupportedVector x = SupportedVector::basis(t.space(), idx);
        const SupportedVector ex = d.embed(x);
        for (int i = 0; i < t.n(); ++i) {
            const auto& U = d.dilated.ops[static_cast<std::size_t>(i)];
            const auto& S = t.ops[static_cast<std::size_t>(i)];
            restriction = std::max(restriction, (op_apply(U, ex) - d.embed(op_apply(S, x))).norm());
            compression = std::max(compression,
                                   (d.compress(op_apply(op_adjoint(U), ex)) - op_apply(op_adjoint(S), x)).norm());
        }
    }
    worst = std::max({worst, restriction, compression});

    ojson corner = ojson::array();
    for (std::size_t b = 0; b < t.sectors.size(); ++b) {
        const auto& sig = t.space().blocks[b];
        BasisIndex e0{static_cast<int>(b), std::vector<std::int64_t>(sig.coords.size(), 0), 0};
        const SupportedVector x = d.embed(SupportedVector::basis(t.space(), e0));
        for (int i : t.sectors[b].A) {
            const auto& U = d.dilated.ops[static_cast<std::size_t>(i - 1)];
            const double r = d.compress(op_apply(op_adjoint(U), x)).norm();
            corner.push_back(ojson{{"block", b}, {"i", i}, {"residual", r}});
            worst = std::max(worst, r);
        }
    }

    ojson ops = ojson::array();
    for (std::size_t i = 0; i < d.dilated.ops.size(); ++i)
        ops.push_back(ojson{{"index", i + 1}, {"blocks", to_json(d.dilated.ops[i])}});
    o.result["original_space"] = t.space().to_string();
    o.result["dilated_space"] = d.dilated.space().to_string();
    o.result["operators"] = ops;
    o.result["dilated_relations"] = to_json(rel);
    o.result["unitarity"] = unitarity;
    o.result["restriction_residual"] = restriction;
    o.result["compression_residual"] = compression;
    o.result["corner_identity"] = corner;
    o.result["max_residual"] = worst;
    o.code = worst <= cfg.tol ? 0 : 1;
    o.summary = std::string(o.code == 0 ? "dilation checks pass" : "dilation checks fail") + ", max residual " +
                short_number(worst);
    return o;
}

Outcome dispatch(Command cmd, const JobSpec& spec, const Document& doc, const StructureConstants& zc,
                 const Config& cfg, ojson& header)
{
    if (cmd == Command::Reduce) return do_reduce(doc, zc);
    const IsometryTuple t = parse_tuple(doc, zc, cfg.tol);
    switch (cmd) {
    case Command::Verify: return do_verify(t, cfg);
    case Command::Standard: return do_standard(t, cfg);
    case Command::Decompose: return do_decompose(t, cfg);
    case Command::Classify: return do_classify(t, cfg);
    case Command::Dilate: return do_dilate(t, cfg);
    case Command::Equiv: {
        const Document other = load_other(spec, doc);
        header["other"] = other.path;
        header["spec_hash"] = fnv1a_hex(doc.text + '\0' + other.text);
        const StructureConstants zc2 = parse_constants(other);
        if (zc2.n() != zc.n())
            throw InputError(other.path + ":/constants/n",
                             "the tuples have different sizes (" + std::to_string(zc.n()) + " and " +
                                 std::to_string(zc2.n()) + ")");
        const auto [i, j] = zc.first_difference(zc2);
        if (i != 0)
            throw InputError(other.path + ":/constants",
                             "structure constants differ at (" + std::to_string(i) + "," + std::to_string(j) +
                                 "): z = " + zc.z(i, j).to_string() + " versus " + zc2.z(i, j).to_string() +
                                 "; unitarily equivalent tuples always share their structure constants");
        const IsometryTuple t2 = parse_tuple(other, zc2, cfg.tol);
        return do_equiv(t, t2, cfg);
    }
    case Command::Reduce: break;
    }
    return {};
}

} // namespace

int run(const JobSpec& spec, std::ostream& out, std::ostream& err)
{
    try {
        const Document doc = load_document(spec.input);
        const Command cmd = resolve_command(spec, doc);
        const Config cfg = resolve_config(spec, doc);
        const StructureConstants zc = parse_constants(doc);

        ojson report;
        report["tool"] = kToolName;
        report["version"] = kToolVersion;
        report["command"] = command_name(cmd);
        report["input"] = doc.path;
        report["spec_hash"] = fnv1a_hex(doc.text);
        report["config"] = to_json(cfg);
        report["constants"] = to_json(zc);

        ojson header = report;
        Outcome o = dispatch(cmd, spec, doc, zc, cfg, header);
        report = header;
        report["result"] = std::move(o.result);
        report["status"] = o.code == 0 ? "pass" : "fail";
        report["exit_code"] = o.code;

        const std::string text = report.dump(2) + "\n";
        if (spec.output.empty()) {
            out << text;
        } else {
            std::ofstream f(spec.output, std::ios::binary);
            if (!f) throw InputError(spec.output, "cannot write report");
            f << text;
            out << o.summary << "\n";
        }
        return o.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace dnc::cli
