#pragma once

#include <nlohmann/json.hpp>

#include "curation/coverage.hpp"
#include "curation/expansion.hpp"
#include "curation/mil_bag.hpp"
#include "curation/mil_instance.hpp"
#include "curation/types.hpp"

namespace curation {

using Json = nlohmann::ordered_json;

// Bag files are line-delimited JSON, one bag per line. decode(encode(x)) is
// the identity and encode(decode(f)) is byte-identical for canonical files.
std::vector<Bag> parse_bags(const std::string& text);
std::string encode_bags(const std::vector<Bag>& bags);
std::vector<Bag> load_bag_file(const std::string& path);
void save_bag_file(const std::vector<Bag>& bags, const std::string& path);

// Assembles a problem from a bag file plus config; throws InputError with the
// aggregated validation report when the file is malformed.
MilProblem load_bags(const std::string& path, const CurationConfig& config);

PageCounts parse_page_counts(const std::string& text);
PageCounts load_page_counts(const std::string& path);

std::vector<ExpansionCandidate> parse_expansions(const std::string& text);
std::vector<ExpansionCandidate> load_expansion_file(const std::string& path);

std::vector<Vec> load_negative_pool(const std::string& path);

ComponentGraph parse_component_graph(const std::string& text);
ComponentGraph load_component_graph(const std::string& path);

RelevanceModel load_relevance_model(const std::string& path);
void save_relevance_model(const RelevanceModel& model, const std::string& path);

Json instance_model_to_json(const InstanceModel& model);
InstanceModel instance_model_from_json(const Json& j);
Json bag_model_to_json(const BagModel& model);
BagModel bag_model_from_json(const Json& j);

void save_instance_model(const InstanceModel& model, const std::string& path);
InstanceModel load_instance_model(const std::string& path);
void save_bag_model(const BagModel& model, const std::string& path);
BagModel load_bag_model(const std::string& path);

// Flat key = value config document; unknown keys are errors.
CurationConfig parse_config(const std::string& text);
CurationConfig load_config(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace curation
