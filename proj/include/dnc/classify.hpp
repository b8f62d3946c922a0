#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dnc/tuples.hpp"
#include "dnc/wold.hpp"

namespace dnc {

/// Wandering data tagged with the structure constants they belong to.
/// Queries across different constants are rejected.
struct LabelledData {
    StructureConstants zc;
    WanderingData data;
};

struct ClassifyConfig {
    double null_tol = 1e-8;     ///< singular values below this span the intertwiner space
    double witness_tol = 1e-9;  ///< bound on witness unitarity and intertwining defects
    double trace_tol = 1e-8;    ///< trace comparison tolerance
    int word_bound = 0;         ///< 0 selects 2 * max(dim)^2
    std::uint64_t seed = 0;
};

/// Basis (d2 x d1 matrices) of {X : X U_j = U'_j X, X U_j^* = U'_j^* X for all j}.
std::vector<Eigen::MatrixXcd> intertwiner_space(const LabelledData& d1, const LabelledData& d2,
                                                const ClassifyConfig& cfg = {});

struct EquivalenceVerdict {
    enum class Kind { Equivalent, Inequivalent, Undecided };
    Kind kind = Kind::Undecided;
    /// Equivalent: the verified unitary with W U_j = U'_j W.
    Eigen::MatrixXcd witness;
    double witness_unitarity = 0.0;
    double witness_intertwining = 0.0;
    /// Inequivalent: "dimension" or "trace".
    std::string certificate;
    std::string word;
    std::complex<double> trace1{}, trace2{};
    /// Undecided: why no witness was certified.
    std::string reason;
    int word_bound = 0;
    std::size_t words_compared = 0;
    int intertwiner_dim = -1;
    std::uint64_t seed = 0;
};

std::string verdict_name(EquivalenceVerdict::Kind k);

EquivalenceVerdict equivalence_verdict(const LabelledData& d1, const LabelledData& d2, const ClassifyConfig& cfg = {});

bool irreducibility_test(const LabelledData& d, const ClassifyConfig& cfg = {});

/// Normal-ordered words U_{j_1}^{e_1} ... U_{j_m}^{e_m} with sum |e| <= L,
/// by total degree then lexicographically. The empty word comes first.
std::vector<std::vector<int>> trace_words(int m, int L);
std::string word_to_string(const std::vector<int>& exps, const IndexSet& indices);
std::complex<double> word_trace(const std::vector<Eigen::MatrixXcd>& unitaries, const std::vector<int>& exps);

struct SectorFingerprint {
    IndexSet A;
    int dim = 0;
    bool reliable = true;
    int word_bound = 0;
    std::vector<std::pair<std::string, std::complex<double>>> traces;
};

struct Fingerprint {
    std::vector<SectorFingerprint> sectors;
    bool partial = false;
};

/// L <= 0 selects 2 * dim^2 per sector.
Fingerprint classification_fingerprint(const WoldReport& report, int L = 0);
bool fingerprints_equal(const Fingerprint& a, const Fingerprint& b, double tol = 1e-8);

} // namespace dnc
