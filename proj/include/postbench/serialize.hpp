#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "postbench/analysis.hpp"
#include "postbench/posterior.hpp"
#include "postbench/sampler.hpp"

namespace postbench {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const Prior& p);
void from_json(const Json& j, Prior& p);
void to_json(Json& j, const SampleStats& s);
void from_json(const Json& j, SampleStats& s);
void to_json(Json& j, const Posterior& p);
void from_json(const Json& j, Posterior& p);
void to_json(Json& j, const Interval& i);
void from_json(const Json& j, Interval& i);
void to_json(Json& j, const PosteriorSummary& s);
void from_json(const Json& j, PosteriorSummary& s);
void to_json(Json& j, const OverlapResult& r);

/// Shortest decimal string that parses back to the same double.
std::string format_full(double x);

/// `index,theta,sigma_sq` rows at full precision.
std::string joint_samples_csv(const JointSamples& samples);
/// Provenance envelope for the CSV: seed, S and the posterior sampled from.
Json joint_samples_envelope(const JointSamples& samples);
JointSamples parse_joint_samples(std::string_view csv, const Json& envelope);

}  // namespace postbench
