#include "dnc/cli/job.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dnc/symalg.hpp"

namespace dnc::cli {

using json = nlohmann::ordered_json;

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t k) { return where + "/" + std::to_string(k); }

const json& require(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object()) throw InputError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(where, "missing key '" + key + "'");
    return *it;
}

std::int64_t as_int(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw InputError(where, "expected an integer");
    return j.get<std::int64_t>();
}

double as_double(const json& j, const std::string& where)
{
    if (!j.is_number()) throw InputError(where, "expected a number");
    return j.get<double>();
}

IndexSet parse_index_set(const json& j, int n, const std::string& where)
{
    if (!j.is_array()) throw InputError(where, "expected an array of indices");
    IndexSet A;
    for (std::size_t k = 0; k < j.size(); ++k) {
        std::int64_t i = as_int(j[k], at(where, k));
        if (i < 1 || i > n) throw InputError(at(where, k), "index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        A.push_back(static_cast<int>(i));
    }
    std::sort(A.begin(), A.end());
    if (std::adjacent_find(A.begin(), A.end()) != A.end()) throw InputError(where, "repeated index");
    return A;
}

Scalar parse_scalar(const json& j, const std::string& where)
{
    if (j.is_number_integer()) return Scalar(Rational(j.get<std::int64_t>()));
    if (j.is_number()) return Scalar::approx(j.get<double>());
    if (j.is_array()) {
        if (j.size() != 2) throw InputError(where, "complex entry must be [re, im]");
        const double re = as_double(j[0], at(where, 0));
        const double im = as_double(j[1], at(where, 1));
        if (j[0].is_number_integer() && j[1].is_number_integer())
            return Scalar(Rational(j[0].get<std::int64_t>())) + Scalar(Rational(j[1].get<std::int64_t>())).times(Phase::exact(1, 4));
        return Scalar::approx({re, im});
    }
    if (j.is_object()) {
        if (j.contains("re") || j.contains("im")) {
            const double re = j.contains("re") ? as_double(j["re"], at(where, "re")) : 0.0;
            const double im = j.contains("im") ? as_double(j["im"], at(where, "im")) : 0.0;
            return Scalar::approx({re, im});
        }
        return Scalar(parse_phase(j, where));
    }
    if (j.is_string()) {
        try {
            FormalSum s = parse_expression(j.get<std::string>(), StructureConstants::trivial(1));
            if (s.is_zero()) return Scalar();
            const auto& pattern = s.terms().begin()->first;
            if (s.size() != 1 || pattern[0].first != 0 || pattern[0].second != 0)
                throw InputError(where, "expected a scalar, got an operator expression");
            return s.terms().begin()->second;
        } catch (const ParseError& e) {
            throw InputError(where, e.what());
        }
    }
    throw InputError(where, "expected a scalar (number, [re, im], {re, im}, phase object or string)");
}

InternalOperator parse_unitary(const json& j, int d, const std::string& where)
{
    if (!j.is_object()) throw InputError(where, "expected a unitary object");
    try {
        if (j.contains("perm")) {
            const json& p = j["perm"];
            if (!p.is_array()) throw InputError(at(where, "perm"), "expected an array");
            std::vector<int> perm;
            for (std::size_t k = 0; k < p.size(); ++k) perm.push_back(static_cast<int>(as_int(p[k], at(at(where, "perm"), k))));
            std::vector<Phase> phases;
            if (j.contains("phases")) {
                const json& ph = j["phases"];
                if (!ph.is_array()) throw InputError(at(where, "phases"), "expected an array");
                for (std::size_t k = 0; k < ph.size(); ++k) phases.push_back(parse_phase(ph[k], at(at(where, "phases"), k)));
            }
            if (static_cast<int>(perm.size()) != d)
                throw InputError(at(where, "perm"), "length " + std::to_string(perm.size()) + " differs from dim_W = " + std::to_string(d));
            return InternalOperator::permutation(std::move(perm), std::move(phases));
        }
        if (j.contains("dense")) {
            const json& rows = j["dense"];
            const std::string w = at(where, "dense");
            if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw InputError(w, "expected " + std::to_string(d) + " rows");
            std::vector<Scalar> entries;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d)
                    throw InputError(at(w, r), "expected " + std::to_string(d) + " entries");
                for (std::size_t c = 0; c < rows[r].size(); ++c) entries.push_back(parse_scalar(rows[r][c], at(at(w, r), c)));
            }
            return InternalOperator::dense(d, std::move(entries));
        }
        if (j.contains("identity")) return InternalOperator::identity(d);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(where, e.what());
    }
    throw InputError(where, "unitary needs 'perm' (with optional 'phases'), 'dense' or 'identity'");
}

IsometryTuple parse_sector(const json& j, const StructureConstants& zc, double tol, const std::string& where)
{
    const IndexSet A = parse_index_set(require(j, "A", where), zc.n(), at(where, "A"));
    try {
        if (j.contains("torus")) return make_torus_sector(zc, A);
        if (j.contains("clock_shift")) {
            const json& cs = j["clock_shift"];
            const std::string w = at(where, "clock_shift");
            const int d = static_cast<int>(as_int(require(cs, "d", w), at(w, "d")));
            Phase lambda = cs.contains("lambda") ? parse_phase(cs["lambda"], at(w, "lambda")) : Phase();
            return make_standard_tuple(zc, make_clock_shift_data(A, d, zc, lambda), tol);
        }
        WanderingData data;
        data.A = A;
        data.dim_W = static_cast<int>(as_int(require(j, "dim_W", where), at(where, "dim_W")));
        if (data.dim_W < 0) throw InputError(at(where, "dim_W"), "must be non-negative");
        if (j.contains("unitaries")) {
            const json& us = j["unitaries"];
            if (!us.is_array()) throw InputError(at(where, "unitaries"), "expected an array");
            for (std::size_t k = 0; k < us.size(); ++k)
                data.unitaries.push_back(parse_unitary(us[k], data.dim_W, at(at(where, "unitaries"), k)));
        }
        return make_standard_tuple(zc, data, tol);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(where, e.what());
    }
}

IsometryTuple parse_expression_tuple(const json& j, const StructureConstants& zc, const std::string& where)
{
    LatticeSignature sig;
    if (j.contains("coords")) {
        const json& cs = j["coords"];
        if (!cs.is_array()) throw InputError(at(where, "coords"), "expected an array");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::string w = at(at(where, "coords"), k);
            if (!cs[k].is_string()) throw InputError(w, "expected \"N0\" or \"Z\"");
            const std::string s = cs[k].get<std::string>();
            if (s == "N0") sig.coords.push_back(CoordKind::HalfLine);
            else if (s == "Z") sig.coords.push_back(CoordKind::Line);
            else throw InputError(w, "expected \"N0\" or \"Z\", got \"" + s + "\"");
        }
    }
    sig.internal_dim = j.contains("internal_dim") ? static_cast<int>(as_int(j["internal_dim"], at(where, "internal_dim"))) : 1;
    if (sig.internal_dim < 1) throw InputError(at(where, "internal_dim"), "must be at least 1");
    const json& ops = require(j, "ops", where);
    const std::string wops = at(where, "ops");
    if (!ops.is_array() || static_cast<int>(ops.size()) != zc.n())
        throw InputError(wops, "expected " + std::to_string(zc.n()) + " operators (one per isometry)");
    IsometryTuple t;
    t.zc = zc;
    t.kind = TupleKind::User;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::string wi = at(wops, i);
        if (!ops[i].is_array()) throw InputError(wi, "expected an array of terms");
        StructuredOperator op(Space::single(sig));
        for (std::size_t k = 0; k < ops[i].size(); ++k) {
            const json& term = ops[i][k];
            const std::string wt = at(wi, k);
            OpTerm ot;
            ot.coef = term.contains("coef") ? parse_scalar(term["coef"], at(wt, "coef")) : Scalar(1);
            ot.factors.resize(sig.coords.size());
            if (term.contains("factors")) {
                const json& fs = term["factors"];
                if (!fs.is_array() || fs.size() != sig.coords.size())
                    throw InputError(at(wt, "factors"), "expected " + std::to_string(sig.coords.size()) + " factors");
                for (std::size_t c = 0; c < fs.size(); ++c) {
                    const std::string wf = at(at(wt, "factors"), c);
                    if (!fs[c].is_object()) throw InputError(wf, "expected a factor object");
                    if (fs[c].contains("shift")) ot.factors[c].shift = as_int(fs[c]["shift"], at(wf, "shift"));
                    if (fs[c].contains("threshold")) ot.factors[c].threshold = as_int(fs[c]["threshold"], at(wf, "threshold"));
                    else if (sig.coords[c] == CoordKind::HalfLine) ot.factors[c].threshold = std::max<std::int64_t>(0, -ot.factors[c].shift);
                    if (fs[c].contains("w")) ot.factors[c].w = parse_phase(fs[c]["w"], at(wf, "w"));
                }
            }
            ot.internal = term.contains("internal") ? parse_unitary(term["internal"], sig.internal_dim, at(wt, "internal"))
                                                    : InternalOperator::identity(sig.internal_dim);
            try {
                op.add_term(0, std::move(ot));
            } catch (const Error& e) {
                throw InputError(wt, e.what());
            }
        }
        t.ops.push_back(std::move(op));
    }
    return t;
}

IsometryTuple parse_tuple_node(const json& j, const StructureConstants& zc, double tol, const std::string& where)
{
    if (!j.is_object()) throw InputError(where, "expected a tuple object");
    if (j.contains("standard")) {
        const std::string w = at(where, "standard");
        const json& secs = require(j["standard"], "sectors", w);
        if (!secs.is_array() || secs.empty()) throw InputError(at(w, "sectors"), "expected a nonempty array");
        std::vector<IsometryTuple> parts;
        for (std::size_t k = 0; k < secs.size(); ++k) parts.push_back(parse_sector(secs[k], zc, tol, at(at(w, "sectors"), k)));
        IsometryTuple t = tuple_direct_sum(parts);
        if (parts.size() == 1) return t;
        t.kind = TupleKind::Standard;
        return t;
    }
    if (j.contains("direct_sum")) {
        const json& parts_j = j["direct_sum"];
        const std::string w = at(where, "direct_sum");
        if (!parts_j.is_array() || parts_j.empty()) throw InputError(w, "expected a nonempty array");
        std::vector<IsometryTuple> parts;
        for (std::size_t k = 0; k < parts_j.size(); ++k) parts.push_back(parse_tuple_node(parts_j[k], zc, tol, at(w, k)));
        return tuple_direct_sum(parts);
    }
    if (j.contains("expression")) return parse_expression_tuple(j["expression"], zc, at(where, "expression"));
    throw InputError(where, "tuple needs one of 'standard', 'direct_sum', 'expression'");
}

} // namespace

std::optional<Command> command_from_string(const std::string& s)
{
    if (s == "reduce") return Command::Reduce;
    if (s == "verify") return Command::Verify;
    if (s == "standard") return Command::Standard;
    if (s == "decompose") return Command::Decompose;
    if (s == "classify") return Command::Classify;
    if (s == "equiv") return Command::Equiv;
    if (s == "dilate") return Command::Dilate;
    return std::nullopt;
}

std::string command_name(Command c)
{
    switch (c) {
    case Command::Reduce: return "reduce";
    case Command::Verify: return "verify";
    case Command::Standard: return "standard";
    case Command::Decompose: return "decompose";
    case Command::Classify: return "classify";
    case Command::Equiv: return "equiv";
    case Command::Dilate: return "dilate";
    }
    return "reduce";
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Document load_document(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    Document doc{path, ss.str(), {}};
    try {
        doc.json = json::parse(doc.text);
    } catch (const json::parse_error& e) {
        throw InputError(path + " byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.json.is_object()) throw InputError(path, "top level must be an object");
    return doc;
}

Phase parse_phase(const json& j, const std::string& where)
{
    if (!j.is_object()) throw InputError(where, "expected a phase object {num, den} or {rad}");
    if (j.contains("rad")) return Phase::radians(as_double(j["rad"], at(where, "rad")));
    const std::int64_t num = as_int(require(j, "num", where), at(where, "num"));
    const std::int64_t den = as_int(require(j, "den", where), at(where, "den"));
    if (den <= 0) throw InputError(at(where, "den"), "denominator must be positive");
    return Phase::exact(num, den);
}

StructureConstants parse_constants(const Document& doc)
{
    const std::string where = doc.path + ":/constants";
    const json& c = require(doc.json, "constants", doc.path + ":");
    const std::int64_t n = as_int(require(c, "n", where), where + "/n");
    if (n < 1 || n > 16) throw InputError(where + "/n", "n must lie in 1..16");
    std::vector<PhaseEntry> upper;
    if (c.contains("z")) {
        const json& zs = c["z"];
        if (!zs.is_array()) throw InputError(where + "/z", "expected an array");
        for (std::size_t k = 0; k < zs.size(); ++k) {
            const std::string w = at(where + "/z", k);
            PhaseEntry e;
            e.i = static_cast<int>(as_int(require(zs[k], "i", w), at(w, "i")));
            e.j = static_cast<int>(as_int(require(zs[k], "j", w), at(w, "j")));
            e.z = parse_phase(require(zs[k], "phase", w), at(w, "phase"));
            upper.push_back(e);
        }
    }
    try {
        return StructureConstants::from_upper(static_cast<int>(n), upper);
    } catch (const Error& e) {
        throw InputError(where + "/z", e.what());
    }
}

IsometryTuple parse_tuple(const Document& doc, const StructureConstants& zc, double tol)
{
    return parse_tuple_node(require(doc.json, "tuple", doc.path + ":"), zc, tol, doc.path + ":/tuple");
}

Config resolve_config(const JobSpec& spec, const Document& doc)
{
    Config cfg;
    const std::string where = doc.path + ":/job";
    if (doc.json.contains("job")) {
        const json& job = doc.json["job"];
        if (!job.is_object()) throw InputError(where, "expected an object");
        if (job.contains("K")) cfg.K = static_cast<int>(as_int(job["K"], where + "/K"));
        if (job.contains("L")) cfg.word_bound = static_cast<int>(as_int(job["L"], where + "/L"));
        if (job.contains("seed")) cfg.seed = static_cast<std::uint64_t>(as_int(job["seed"], where + "/seed"));
        if (job.contains("tol")) cfg.tol = as_double(job["tol"], where + "/tol");
    }
    if (spec.K) cfg.K = *spec.K;
    if (spec.word_bound) cfg.word_bound = *spec.word_bound;
    if (spec.seed) cfg.seed = *spec.seed;
    if (spec.tol) cfg.tol = *spec.tol;
    if (cfg.K < 1) throw InputError("--window", "K must be at least 1");
    if (cfg.K > 64) throw InputError("--window", "K must be at most 64");
    if (!(cfg.tol > 0)) throw InputError("--tol", "tolerance must be positive");
    if (cfg.word_bound < 0) throw InputError("--word-bound", "L must be non-negative");
    return cfg;
}

Command resolve_command(const JobSpec& spec, const Document& doc)
{
    if (spec.command) return *spec.command;
    const std::string where = doc.path + ":/job/command";
    if (!doc.json.contains("job") || !doc.json["job"].contains("command"))
        throw InputError(where, "no command given on the command line or in the job block");
    const json& c = doc.json["job"]["command"];
    if (!c.is_string()) throw InputError(where, "expected a string");
    auto cmd = command_from_string(c.get<std::string>());
    if (!cmd) throw InputError(where, "unknown command '" + c.get<std::string>() + "'");
    return *cmd;
}

} // namespace dnc::cli
