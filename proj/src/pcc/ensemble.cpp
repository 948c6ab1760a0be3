#include "synteval/pcc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace synteval::pcc {

namespace {

std::vector<PccEnsemble::ColumnMeta> meta_of(const PccData& data) {
  std::vector<PccEnsemble::ColumnMeta> meta;
  meta.reserve(data.columns.size());
  for (const auto& c : data.columns)
    meta.push_back({c.name, c.categorical, c.n_cats, c.is_coupling, c.parent});
  return meta;
}

}  // namespace

PccEnsemble PccEnsemble::init(const Table& t, const PccPriorConfig& prior,
                              std::size_t n_chains, std::uint64_t seed) {
  if (t.n_rows() == 0 || t.n_cols() == 0)
    throw DataError("pcc: cannot fit an empty table");
  if (n_chains == 0) throw DataError("pcc: need at least one chain");
  PccEnsemble e;
  e.data_ = make_pcc_data(t, prior);
  e.prior_ = prior;
  e.n_base_ = e.data_->n_base;
  e.column_meta_ = meta_of(*e.data_);
  e.chains_.reserve(n_chains);
  for (std::size_t i = 0; i < n_chains; ++i)
    e.chains_.emplace_back(e.data_, prior, derive_seed(seed, "pcc-chain", i));
  return e;
}

void PccEnsemble::step(std::size_t n_sweeps) {
  for (std::size_t s = 0; s < n_sweeps; ++s)
    for (auto& chain : chains_) chain.sweep();
  sweeps_done_ += n_sweeps;
}

double PccEnsemble::logp(std::span<const ColumnValue> targets,
                         std::span<const ColumnValue> conditions) const {
  if (targets.empty()) throw DataError("pcc: logp needs at least one target");
  for (const auto& t : targets) {
    if (t.column >= n_total_columns()) throw DataError("pcc: unknown target column");
    for (const auto& c : conditions)
      if (c.column == t.column)
        throw DataError("pcc: column '" + column_meta_[t.column].name +
                        "' is both target and condition");
  }
  for (const auto& c : conditions)
    if (c.column >= n_total_columns()) throw DataError("pcc: unknown condition column");

  // mean of per-chain probabilities
  std::vector<double> per_chain(chains_.size());
  for (std::size_t i = 0; i < chains_.size(); ++i)
    per_chain[i] = chains_[i].logp(targets, conditions);
  double mx = *std::max_element(per_chain.begin(), per_chain.end());
  if (!std::isfinite(mx)) return mx;
  double total = 0;
  for (double lp : per_chain) total += std::exp(lp - mx);
  return mx + std::log(total / static_cast<double>(chains_.size()));
}

Table PccEnsemble::simulate(std::span<const std::size_t> columns,
                            std::span<const ColumnValue> conditions, std::size_t n,
                            std::uint64_t seed) const {
  for (std::size_t col : columns) {
    if (col >= n_total_columns()) throw DataError("pcc: unknown simulate column");
    for (const auto& c : conditions)
      if (c.column == col)
        throw DataError("pcc: simulate column is also a condition");
  }

  std::vector<ColumnSpec> specs;
  for (std::size_t col : columns) {
    const auto& meta = column_meta_[col];
    ColumnSpec spec;
    spec.name = meta.name;
    if (meta.categorical) {
      spec.kind = ColumnKind::Categorical;
      if (meta.is_coupling) {
        spec.categories = {"present", "absent"};
      } else {
        for (std::size_t c = 0; c < meta.n_cats; ++c)
          spec.categories.push_back("c" + std::to_string(c));
      }
    } else {
      spec.kind = ColumnKind::Continuous;
    }
    specs.push_back(std::move(spec));
  }
  Codebook schema{std::move(specs)};

  Rng rng = make_rng(derive_seed(seed, "pcc-simulate"));
  std::uniform_int_distribution<std::size_t> pick_chain(0, chains_.size() - 1);
  std::vector<Cell> cells;
  cells.reserve(n * columns.size());
  std::vector<Cell> row(columns.size());
  for (std::size_t i = 0; i < n; ++i) {
    chains_[pick_chain(rng)].simulate_row(columns, conditions, row, rng);
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return Table(std::move(schema), std::move(cells));
}

std::optional<std::size_t> PccEnsemble::coupling_column(std::size_t base_col) const {
  for (std::size_t j = n_base_; j < column_meta_.size(); ++j)
    if (column_meta_[j].is_coupling && column_meta_[j].parent == base_col) return j;
  return std::nullopt;
}

void PccEnsemble::check_consistency(double tol) const {
  for (const auto& chain : chains_) chain.check_consistency(tol);
}

//----------------------------------------------------------------------------
// state file (JSON container; magic bytes lead the document)

class PccSerializer {
public:
  static constexpr const char* kMagic = "synteval-pcc";
  static constexpr int kVersion = 1;

  static nlohmann::ordered_json to_json(const PccEnsemble& e) {
    nlohmann::ordered_json doc;
    doc["magic"] = kMagic;
    doc["version"] = kVersion;
    doc["prior"] = {{"alpha_shape", e.prior_.alpha_shape},
                    {"alpha_rate", e.prior_.alpha_rate},
                    {"dirichlet_gamma", e.prior_.dirichlet_gamma},
                    {"kappa0", e.prior_.kappa0},
                    {"nu0", e.prior_.nu0}};
    if (e.prior_.fixed_alpha) doc["prior"]["fixed_alpha"] = *e.prior_.fixed_alpha;
    doc["n_rows"] = e.chains_.empty() ? 0 : e.chains_.front().n_rows();
    doc["n_base_columns"] = e.n_base_;
    doc["sweeps_done"] = e.sweeps_done_;

    doc["columns"] = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < e.column_meta_.size(); ++j) {
      const auto& meta = e.column_meta_[j];
      nlohmann::ordered_json jc;
      jc["name"] = meta.name;
      jc["categorical"] = meta.categorical;
      if (meta.categorical) {
        jc["n_cats"] = meta.n_cats;
        jc["dirichlet_gamma"] = e.data_->columns[j].dirichlet_gamma;
      } else {
        const auto& h = e.data_->columns[j].hyper;
        jc["hyper"] = {{"mean0", h.mean0},
                       {"kappa0", h.kappa0},
                       {"nu0", h.nu0},
                       {"s2_0", h.s2_0}};
      }
      if (meta.is_coupling) jc["parent"] = meta.parent;
      doc["columns"].push_back(std::move(jc));
    }

    doc["chains"] = nlohmann::ordered_json::array();
    for (const auto& chain : e.chains_) {
      nlohmann::ordered_json jc;
      jc["view_alpha"] = chain.view_alpha_;
      std::ostringstream rng_state;
      rng_state << chain.rng_;
      jc["rng"] = rng_state.str();
      jc["view_of_col"] = chain.view_of_col_;
      jc["views"] = nlohmann::ordered_json::array();
      for (const auto& v : chain.views_) {
        nlohmann::ordered_json jv;
        jv["alpha"] = v.alpha;
        jv["columns"] = v.columns;
        jv["row_category"] = v.row_category;
        jv["stats"] = nlohmann::ordered_json::object();
        for (std::size_t col : v.columns) {
          nlohmann::ordered_json js = nlohmann::ordered_json::array();
          for (const auto& s : v.stats[col]) {
            if (const auto* cat = std::get_if<CatStats>(&s))
              js.push_back({{"counts", cat->counts}, {"total", cat->total}});
            else {
              const auto& cont = std::get<ContStats>(s);
              js.push_back(
                  {{"n", cont.n}, {"sum", cont.sum}, {"sum_sq", cont.sum_sq}});
            }
          }
          jv["stats"][std::to_string(col)] = std::move(js);
        }
        jc["views"].push_back(std::move(jv));
      }
      doc["chains"].push_back(std::move(jc));
    }
    return doc;
  }

  static PccEnsemble from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("magic", "") != kMagic)
      throw DataError("pcc state: bad magic header");
    if (doc.value("version", -1) != kVersion)
      throw DataError("pcc state: unsupported format version");

    PccEnsemble e;
    const auto& jp = doc.at("prior");
    e.prior_.alpha_shape = jp.at("alpha_shape").get<double>();
    e.prior_.alpha_rate = jp.at("alpha_rate").get<double>();
    e.prior_.dirichlet_gamma = jp.at("dirichlet_gamma").get<double>();
    e.prior_.kappa0 = jp.at("kappa0").get<double>();
    e.prior_.nu0 = jp.at("nu0").get<double>();
    if (jp.contains("fixed_alpha")) e.prior_.fixed_alpha = jp["fixed_alpha"].get<double>();
    e.n_base_ = doc.at("n_base_columns").get<std::size_t>();
    e.sweeps_done_ = doc.at("sweeps_done").get<std::size_t>();
    const std::size_t n_rows = doc.at("n_rows").get<std::size_t>();

    // columns without raw values: enough for queries, not for stepping
    auto data = std::make_shared<PccData>();
    data->n_rows = n_rows;
    data->n_base = e.n_base_;
    for (const auto& jc : doc.at("columns")) {
      PccColumn col;
      col.name = jc.at("name").get<std::string>();
      col.categorical = jc.at("categorical").get<bool>();
      if (col.categorical) {
        col.n_cats = jc.at("n_cats").get<std::size_t>();
        col.dirichlet_gamma = jc.at("dirichlet_gamma").get<double>();
      } else {
        const auto& jh = jc.at("hyper");
        col.hyper = {jh.at("mean0").get<double>(), jh.at("kappa0").get<double>(),
                     jh.at("nu0").get<double>(), jh.at("s2_0").get<double>()};
      }
      if (jc.contains("parent")) {
        col.is_coupling = true;
        col.parent = jc.at("parent").get<std::size_t>();
      }
      data->columns.push_back(std::move(col));
    }
    e.data_ = data;
    e.column_meta_ = meta_of(*data);

    for (const auto& jc : doc.at("chains")) {
      PccState chain;
      chain.data_ = e.data_;
      chain.prior_ = e.prior_;
      chain.n_rows_ = n_rows;
      chain.view_alpha_ = jc.at("view_alpha").get<double>();
      chain.view_of_col_ = jc.at("view_of_col").get<std::vector<std::size_t>>();
      std::istringstream rng_state(jc.at("rng").get<std::string>());
      rng_state >> chain.rng_;
      chain.views_.clear();
      for (const auto& jv : jc.at("views")) {
        PccState::View v;
        v.alpha = jv.at("alpha").get<double>();
        v.columns = jv.at("columns").get<std::vector<std::size_t>>();
        v.row_category = jv.at("row_category").get<std::vector<int>>();
        int k = 0;
        for (int c : v.row_category) k = std::max(k, c + 1);
        v.category_sizes.assign(static_cast<std::size_t>(k), 0);
        for (int c : v.row_category) ++v.category_sizes[static_cast<std::size_t>(c)];
        v.stats.resize(data->columns.size());
        for (std::size_t col : v.columns) {
          const auto& js = jv.at("stats").at(std::to_string(col));
          if (js.size() != static_cast<std::size_t>(k))
            throw DataError("pcc state: stats/category count mismatch");
          for (const auto& s : js) {
            if (data->columns[col].categorical) {
              CatStats cs(data->columns[col].n_cats);
              cs.counts = s.at("counts").get<std::vector<double>>();
              cs.total = s.at("total").get<double>();
              if (cs.counts.size() != data->columns[col].n_cats)
                throw DataError("pcc state: category width mismatch");
              v.stats[col].push_back(std::move(cs));
            } else {
              ContStats cs;
              cs.n = s.at("n").get<double>();
              cs.sum = s.at("sum").get<double>();
              cs.sum_sq = s.at("sum_sq").get<double>();
              v.stats[col].push_back(cs);
            }
          }
        }
        chain.views_.push_back(std::move(v));
      }
      e.chains_.push_back(std::move(chain));
    }
    return e;
  }
};

void PccEnsemble::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("pcc state: cannot write '" + path + "'");
  out << PccSerializer::to_json(*this).dump();
}

PccEnsemble PccEnsemble::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("pcc state: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("pcc state: corrupt file: ") + e.what());
  }
  try {
    return PccSerializer::from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("pcc state: malformed document: ") + e.what());
  }
}

}  // namespace synteval::pcc
