#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "vsum/bessel.hpp"
#include "vsum/coeffs.hpp"
#include "vsum/hankel.hpp"
#include "vsum/kloosterman.hpp"
#include "vsum/numberfield.hpp"
#include "vsum/twistsums.hpp"
#include "vsum/voronoi.hpp"

namespace vsum {

using json = nlohmann::json;

uint64_t fnv1a(const std::string& s);
// FNV-1a of the compact dump (keys sorted) followed by the seed.
std::string config_hash(const json& cfg, uint64_t seed);

json provenance(const std::string& module, const std::string& operation, double tolerance);

json to_json(cplx z);
json to_json(const FieldElement& a);
json to_json(const VoronoiReport& r);
json to_json(const ScanReport& r);  // summary only
json to_json(const PipelineReport& r);
json to_json(const WeilReport& r);
json to_json(const HeckeReport& r);
json to_json(const DirichletSweep& r);
json to_json(const Approximation& a);
json to_json(const ParsevalReport& r);
json to_json(const DualCheck& r);
json to_json(const DecayReport& r);
json to_json(const AsymptoticReport& r);
json to_json(const AssemblyReport& r);
json to_json(const AnnulusComparison& r);

// %.17g, so values round-trip
std::string fmt(double x);

// header row then one row per record; fields separated by commas
std::string scan_csv(const ScanReport& r);
std::string weil_csv(const WeilReport& r);

std::shared_ptr<const CoefficientProvider> provider_by_name(const std::string& name, uint64_t seed = 1);
BesselParamsReal kernel_by_name(const std::string& name);

}  // namespace vsum
