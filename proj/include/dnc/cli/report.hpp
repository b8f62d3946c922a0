#pragma once

#include <complex>

#include <Eigen/Dense>
#include <json.hpp>

#include "dnc/classify.hpp"
#include "dnc/cli/job.hpp"
#include "dnc/opalg.hpp"
#include "dnc/symalg.hpp"
#include "dnc/tuples.hpp"
#include "dnc/wold.hpp"

namespace dnc::cli {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolName = "dnc";
inline constexpr const char* kToolVersion = "1.0.0";

ojson to_json(const Phase& p);
ojson to_json(const Scalar& s);
ojson to_json(std::complex<double> c);
ojson to_json(const Eigen::MatrixXcd& m);
ojson to_json(const InternalOperator& op);
ojson to_json(const WanderingData& d);
ojson to_json(const StructuredOperator& op);
ojson to_json(const StructureConstants& zc);
ojson to_json(const RelationReport& r);
ojson to_json(const TorusFormReport& r);
ojson to_json(const SectorReport& s);
ojson to_json(const WoldReport& r);
ojson to_json(const EquivalenceVerdict& v);
ojson to_json(const Fingerprint& f);
ojson to_json(const Config& c);

/// Values below 1e-15 in modulus print as 0 and -0.0 prints as 0.
double clean(double x);

} // namespace dnc::cli
