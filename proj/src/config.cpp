#include "synteval/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "synteval/error.hpp"

namespace synteval {

void EvalConfig::validate() const {
  if (replications < 1) throw DataError("config: replications must be >= 1");
  for (std::size_t i = 0; i < synth_paths.size(); ++i)
    for (std::size_t j = i + 1; j < synth_paths.size(); ++j)
      if (synth_paths[i].first == synth_paths[j].first)
        throw DataError("config: duplicate synthesizer name '" +
                        synth_paths[i].first + "'");
  if (caps.mi_rows == 0 || caps.efficacy_rows == 0 || caps.detection_rows == 0 ||
      caps.privacy_rows == 0)
    throw DataError("config: subsample caps must be positive");
  if (surrogate && !pcc_state_path)
    throw DataError("config: surrogate metrics enabled but no PCC state supplied");
  if (privacy_task) {
    if (privacy_task->sensitive.empty() || privacy_task->keys.empty())
      throw DataError("config: privacy task needs sensitive and key columns");
    for (const auto& s : privacy_task->sensitive)
      for (const auto& k : privacy_task->keys)
        if (s == k)
          throw DataError("config: column '" + s + "' is both sensitive and key");
  }
}

EvalConfig EvalConfig::from_json_text(const std::string& text) {
  nlohmann::ordered_json doc;  // keeps the synth evaluation order as written
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }
  EvalConfig cfg;
  cfg.real_path = doc.value("real_path", "");
  cfg.codebook_path = doc.value("codebook_path", "");
  if (doc.contains("synth_paths"))
    for (const auto& [name, path] : doc["synth_paths"].items())
      cfg.synth_paths.emplace_back(name, path.get<std::string>());
  if (doc.contains("pcc_state_path"))
    cfg.pcc_state_path = doc["pcc_state_path"].get<std::string>();
  cfg.surrogate = doc.value("surrogate", cfg.pcc_state_path.has_value());
  cfg.replications = doc.value("replications", std::size_t{5});
  cfg.seed = doc.value("seed", std::uint64_t{0});

  if (doc.contains("groups")) {
    const auto& g = doc["groups"];
    cfg.missingness = g.value("missingness", true);
    cfg.marginal = g.value("marginal", true);
    cfg.pairwise = g.value("pairwise", true);
    cfg.loo = g.value("loo", true);
    cfg.full_joint = g.value("full_joint", true);
    cfg.privacy = g.value("privacy", true);
  }
  cfg.baselines = doc.value("baselines", true);

  if (doc.contains("caps")) {
    const auto& c = doc["caps"];
    cfg.caps.mi_rows = c.value("mi_rows", cfg.caps.mi_rows);
    cfg.caps.efficacy_rows = c.value("efficacy_rows", cfg.caps.efficacy_rows);
    cfg.caps.detection_rows = c.value("detection_rows", cfg.caps.detection_rows);
    cfg.caps.privacy_rows = c.value("privacy_rows", cfg.caps.privacy_rows);
  }
  if (doc.contains("privacy_task")) {
    PrivacyTask task;
    task.sensitive = doc["privacy_task"].at("sensitive").get<std::vector<std::string>>();
    task.keys = doc["privacy_task"].at("keys").get<std::vector<std::string>>();
    cfg.privacy_task = std::move(task);
  }
  cfg.validate();
  return cfg;
}

EvalConfig EvalConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string EvalConfig::to_json_text() const {
  nlohmann::ordered_json doc;
  doc["real_path"] = real_path;
  doc["codebook_path"] = codebook_path;
  doc["synth_paths"] = nlohmann::ordered_json::object();
  for (const auto& [name, path] : synth_paths) doc["synth_paths"][name] = path;
  if (pcc_state_path) doc["pcc_state_path"] = *pcc_state_path;
  doc["surrogate"] = surrogate;
  doc["replications"] = replications;
  doc["seed"] = seed;
  doc["groups"] = {{"missingness", missingness}, {"marginal", marginal},
                   {"pairwise", pairwise},       {"loo", loo},
                   {"full_joint", full_joint},   {"privacy", privacy}};
  doc["baselines"] = baselines;
  doc["caps"] = {{"mi_rows", caps.mi_rows},
                 {"efficacy_rows", caps.efficacy_rows},
                 {"detection_rows", caps.detection_rows},
                 {"privacy_rows", caps.privacy_rows}};
  if (privacy_task)
    doc["privacy_task"] = {{"sensitive", privacy_task->sensitive},
                           {"keys", privacy_task->keys}};
  return doc.dump(2);
}

}  // namespace synteval
