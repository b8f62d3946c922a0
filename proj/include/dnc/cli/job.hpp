#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "dnc/error.hpp"
#include "dnc/phase.hpp"
#include "dnc/tuples.hpp"

namespace dnc::cli {

enum class Command { Reduce, Verify, Standard, Decompose, Classify, Equiv, Dilate };

std::optional<Command> command_from_string(const std::string& s);
std::string command_name(Command c);

/// Numeric defaults; every report echoes the values in force.
struct Config {
    int K = 6;
    int k_max = 64;
    double tol = 1e-10;
    double rank_tol = 1e-8;
    double reliable_residual = 1e-8;
    double witness_tol = 1e-9;
    int word_bound = 0; ///< 0 means 2 * dim^2
    std::uint64_t seed = 0;
};

struct JobSpec {
    std::optional<Command> command;
    std::string input;
    std::string other;
    std::string output;
    std::optional<int> K;
    std::optional<int> word_bound;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

/// Malformed input; `where` names the file and JSON path or character offset.
class InputError : public Error {
public:
    InputError(const std::string& where, const std::string& what) : Error(where + ": " + what) {}
};

struct Document {
    std::string path;
    std::string text;
    nlohmann::ordered_json json;
};

Document load_document(const std::string& path);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

Phase parse_phase(const nlohmann::ordered_json& j, const std::string& where);
StructureConstants parse_constants(const Document& doc);
/// Builds the tuple described by the document's `tuple` block.
IsometryTuple parse_tuple(const Document& doc, const StructureConstants& zc, double tol);
/// Resolves the effective configuration: flags override the `job` block.
Config resolve_config(const JobSpec& spec, const Document& doc);
Command resolve_command(const JobSpec& spec, const Document& doc);

} // namespace dnc::cli
