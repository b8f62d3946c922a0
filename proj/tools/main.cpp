#include <iostream>

#include <CLI11.hpp>

#include "dnc/cli/report.hpp"
#include "dnc/cli/run.hpp"

int main(int argc, char** argv)
{
    using namespace dnc::cli;

    CLI::App app{"Isometry tuples with phase commutation relations: normal forms, Wold decomposition, classification"};
    app.set_version_flag("--version", kToolVersion);

    JobSpec spec;
    std::string command;
    int K = 0;
    int word_bound = 0;
    std::uint64_t seed = 0;
    double tol = 0;

    app.add_option("command", command, "reduce | verify | standard | decompose | classify | equiv | dilate");
    app.add_option("-i,--input", spec.input, "job specification (JSON)")->required();
    app.add_option("-o,--output", spec.output, "report path (default: stdout)");
    auto* k_opt = app.add_option("-K,--window", K, "window size K");
    auto* s_opt = app.add_option("--seed", seed, "seed for the witness search");
    auto* t_opt = app.add_option("--tol", tol, "residual tolerance");
    auto* l_opt = app.add_option("-L,--word-bound", word_bound, "trace word length bound");
    app.add_option("--other", spec.other, "second specification for equiv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (!command.empty()) {
        spec.command = command_from_string(command);
        if (!spec.command) {
            std::cerr << "input error: unknown command '" << command << "'\n";
            return 2;
        }
    }
    if (*k_opt) spec.K = K;
    if (*s_opt) spec.seed = seed;
    if (*t_opt) spec.tol = tol;
    if (*l_opt) spec.word_bound = word_bound;

    return run(spec, std::cout, std::cerr);
}
