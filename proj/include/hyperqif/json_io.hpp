#pragma once

#include <string>

#include <json.hpp>

#include "hyperqif/abstraction.hpp"
#include "hyperqif/corpus.hpp"
#include "hyperqif/envanalysis.hpp"
#include "hyperqif/hyper.hpp"

namespace hyperqif::io {

using json = nlohmann::json;

/// Version tag stamped into every emitted document. Readers accept
/// documents without the tag and reject documents carrying a different one.
inline constexpr const char* kSchemaTag = "hyperqif/1";

json to_json(const Distribution& dist);
json to_json(const Channel& channel);
json to_json(const JointDistribution& joint);
json to_json(const GainFunction& gain);
json to_json(const Hyper& hyper);
json to_json(const HigherHyper& higher);
json to_json(const RefinementWitness& witness);
json to_json(const SecurityDecomposition& decomposition, const std::string& measure);
json to_json(const DecompositionReport& report);

Distribution distribution_from_json(const json& doc);
Channel channel_from_json(const json& doc);
JointDistribution joint_from_json(const json& doc);
GainFunction gain_from_json(const json& doc);
Hyper hyper_from_json(const json& doc);
HigherHyper higher_hyper_from_json(const json& doc);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& doc);

}  // namespace hyperqif::io
