#ifndef WALSHLAB_ARTIFACT_IO_HPP
#define WALSHLAB_ARTIFACT_IO_HPP

#include <string>

#include <json.hpp>

#include "walshlab/lemma1.hpp"
#include "walshlab/orlicz.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/witness.hpp"

namespace walshlab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json spectrum_to_json(const Spectrum& s);
nlohmann::json rat_to_json(const Rat64& r);

nlohmann::json report_to_json(const SequenceReport& rep);
nlohmann::json artifact_to_json(const Lemma1Artifact& artifact,
                                const std::vector<Verdict>& verdicts,
                                const ExtractionReport& extraction);
nlohmann::json plan_to_json(const WitnessPlan& plan);
nlohmann::json phi_report_to_json(const PiecewiseConvex& phi, const PhiReport& rep);

/// Serializes a finite value exactly when it is an integer, otherwise as the
/// shortest round-trip decimal.
std::string number_str(const Rat64& r);
std::string number_str(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace walshlab

#endif
