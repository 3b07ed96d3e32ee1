#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mch/evolve.hpp"
#include "mch/indices.hpp"
#include "mch/linop.hpp"
#include "mch/wave.hpp"

namespace mch::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-trip text for a double: %.17g, "nan"/"inf" spelled out.
std::string format_double(double v);

struct Provenance {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string timestamp;  ///< ISO 8601, UTC
};

Provenance make_provenance(std::string command,
                           std::vector<std::pair<std::string, std::string>> parameters);
const char* tool_version();

/// "# key: value" lines, the timestamp last, then the header row and rows.
void write_csv(std::ostream& os, const Provenance& prov, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// {"provenance": {...}} followed by the keys of `body`, indented so that the
/// timestamp occupies a line of its own.
void write_json(std::ostream& os, const Provenance& prov, const Json& body);

Json to_json(const WaveParams& p);
Json to_json(const SnoidalParams& s);
Json to_json(const ValidityReport& v);
Json to_json(const SpectralReport& r);
Json to_json(const PairingResult& r);
Json to_json(const MorseReport& r);
Json to_json(const IndexSample& s);
Json to_json(const ScanSummary& s);
Json to_json(const DSecondReport& r);
Json to_json(const KreinReport& r);
Json to_json(const StabilityRunReport& r);
Json to_json(const LinearGrowthReport& r);

}  // namespace mch::cli
