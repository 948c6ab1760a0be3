#include "synteval/report.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "synteval/error.hpp"

namespace synteval {

namespace {

MetricGroup group_from_name(const std::string& s) {
  for (MetricGroup g : {MetricGroup::Missingness, MetricGroup::Marginal,
                        MetricGroup::Pairwise, MetricGroup::Loo,
                        MetricGroup::FullJoint, MetricGroup::Privacy})
    if (s == metric_group_name(g)) return g;
  throw DataError("report: unknown group '" + s + "'");
}

nlohmann::ordered_json metric_to_json(const MetricAggregate& m) {
  nlohmann::ordered_json j;
  j["group"] = metric_group_name(m.group);
  j["mean"] = m.mean;
  j["stderr"] = m.stderr_;
  j["per_replication"] = m.per_replication;
  if (!m.detail.empty()) {
    j["detail"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.detail) j["detail"][k] = v;
  }
  if (!m.diagnostics.empty()) j["diagnostics"] = m.diagnostics;
  return j;
}

nlohmann::ordered_json group_to_json(const GroupScore& g) {
  nlohmann::ordered_json j;
  j["mean"] = g.mean;
  j["stderr"] = g.stderr_;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& m : g.metrics) j["metrics"][m.name] = metric_to_json(m);
  return j;
}

nlohmann::ordered_json synth_to_json(const SynthesizerReport& s) {
  nlohmann::ordered_json j;
  j["groups"] = nlohmann::ordered_json::object();
  for (const auto& g : s.structural)
    j["groups"][metric_group_name(g.group)] = group_to_json(g);
  if (s.privacy) j["privacy"] = group_to_json(*s.privacy);
  if (s.quality) j["quality"] = *s.quality;
  return j;
}

GroupScore group_from_json(MetricGroup group, const nlohmann::ordered_json& j) {
  GroupScore g;
  g.group = group;
  g.mean = j.at("mean").get<double>();
  g.stderr_ = j.at("stderr").get<double>();
  for (const auto& [name, jm] : j.at("metrics").items()) {
    MetricAggregate m;
    m.name = name;
    m.group = group_from_name(jm.at("group").get<std::string>());
    m.mean = jm.at("mean").get<double>();
    m.stderr_ = jm.at("stderr").get<double>();
    m.per_replication = jm.at("per_replication").get<std::vector<double>>();
    if (jm.contains("detail"))
      for (const auto& [k, v] : jm["detail"].items())
        m.detail.emplace_back(k, v.get<double>());
    if (jm.contains("diagnostics"))
      m.diagnostics = jm["diagnostics"].get<std::vector<std::string>>();
    g.metrics.push_back(std::move(m));
  }
  return g;
}

SynthesizerReport synth_from_json(const std::string& name,
                                  const nlohmann::ordered_json& j) {
  SynthesizerReport s;
  s.name = name;
  for (MetricGroup g : {MetricGroup::Missingness, MetricGroup::Marginal,
                        MetricGroup::Pairwise, MetricGroup::Loo,
                        MetricGroup::FullJoint}) {
    const char* key = metric_group_name(g);
    if (j.at("groups").contains(key))
      s.structural.push_back(group_from_json(g, j["groups"][key]));
  }
  if (j.contains("privacy"))
    s.privacy = group_from_json(MetricGroup::Privacy, j["privacy"]);
  if (j.contains("quality")) s.quality = j["quality"].get<double>();
  return s;
}

void csv_rows(std::ostringstream& out, const SynthesizerReport& s) {
  auto emit_group = [&](const GroupScore& g) {
    for (const auto& m : g.metrics)
      for (std::size_t r = 0; r < m.per_replication.size(); ++r)
        out << s.name << ',' << metric_group_name(g.group) << ',' << m.name << ','
            << r << ',' << m.per_replication[r] << '\n';
  };
  for (const auto& g : s.structural) emit_group(g);
  if (s.privacy) emit_group(*s.privacy);
}

void markdown_row(std::ostringstream& out, const SynthesizerReport& s,
                  const std::vector<MetricGroup>& order) {
  out << "| " << s.name << " |";
  for (MetricGroup g : order) {
    const GroupScore* found = nullptr;
    for (const auto& gs : s.structural)
      if (gs.group == g) found = &gs;
    if (g == MetricGroup::Privacy && s.privacy) found = &*s.privacy;
    if (found) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %.4f ± %.4f |", found->mean, found->stderr_);
      out << buf;
    } else {
      out << " — |";
    }
  }
  if (s.quality) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.4f |", *s.quality);
    out << buf;
  } else {
    out << " — |";
  }
  out << '\n';
}

}  // namespace

double quality_score(const std::vector<GroupScore>& trace,
                     const std::vector<GroupScore>& half_trace) {
  if (trace.size() != half_trace.size())
    throw DataError("quality: traces cover different group sets");
  if (trace.empty()) throw DataError("quality: empty trace");
  double gap = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].group != half_trace[i].group)
      throw DataError("quality: traces are misaligned");
    gap += std::abs(trace[i].mean - half_trace[i].mean);
  }
  return clamp01(1.0 - gap / static_cast<double>(trace.size()));
}

std::string emit_report(const EvaluationReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = r.schema_version;
    doc["tool"] = {{"name", "synteval"}, {"version", r.tool_version}};
    doc["created_at"] = r.created_at;
    doc["runtime_seconds"] = r.runtime_seconds;
    doc["seed"] = r.seed;
    doc["replications"] = r.replications;
    doc["quality_formula"] = r.quality_formula;
    doc["group_order"] = {"missingness", "marginal", "pairwise", "loo", "full_joint"};
    doc["synthesizers"] = nlohmann::ordered_json::object();
    for (const auto& s : r.synthesizers) doc["synthesizers"][s.name] = synth_to_json(s);
    doc["baselines"] = nlohmann::ordered_json::object();
    for (const auto& s : r.baselines) doc["baselines"][s.name] = synth_to_json(s);
    return doc.dump(2);
  }

  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "synthesizer,group,metric,replication,value\n";
    for (const auto& s : r.synthesizers) csv_rows(out, s);
    for (const auto& s : r.baselines) csv_rows(out, s);
    return out.str();
  }

  // markdown group-trace table
  std::ostringstream out;
  const std::vector<MetricGroup> order = {MetricGroup::Missingness, MetricGroup::Marginal,
                                          MetricGroup::Pairwise, MetricGroup::Loo,
                                          MetricGroup::FullJoint, MetricGroup::Privacy};
  out << "| synthesizer |";
  for (MetricGroup g : order) out << ' ' << metric_group_name(g) << " |";
  out << " quality |\n|";
  for (std::size_t i = 0; i < order.size() + 2; ++i) out << "---|";
  out << '\n';
  for (const auto& s : r.synthesizers) markdown_row(out, s, order);
  for (const auto& s : r.baselines) markdown_row(out, s, order);
  return out.str();
}

void emit_report_file(const EvaluationReport& r, ReportFormat format,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("report: cannot write '" + path + "'");
  out << emit_report(r, format);
}

EvaluationReport parse_report_json(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: invalid JSON: ") + e.what());
  }
  EvaluationReport r;
  r.schema_version = doc.at("schema_version").get<int>();
  r.tool_version = doc.at("tool").at("version").get<std::string>();
  r.created_at = doc.at("created_at").get<std::string>();
  r.runtime_seconds = doc.at("runtime_seconds").get<double>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.replications = doc.at("replications").get<std::size_t>();
  r.quality_formula = doc.at("quality_formula").get<std::string>();
  for (const auto& [name, js] : doc.at("synthesizers").items())
    r.synthesizers.push_back(synth_from_json(name, js));
  for (const auto& [name, js] : doc.at("baselines").items())
    r.baselines.push_back(synth_from_json(name, js));
  return r;
}

}  // namespace synteval
