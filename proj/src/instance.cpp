#include "kmpmd/instance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "kmpmd/errors.hpp"

namespace kmpmd {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Instance::Instance(MetricSpace space, std::vector<Request> requests)
    : space_(std::move(space)), requests_(std::move(requests)) {
  const auto k = static_cast<std::size_t>(space_.k());
  if (requests_.size() % k != 0) {
    throw InputError("m not a multiple of k (m = " + std::to_string(requests_.size()) +
                     ", k = " + std::to_string(k) + ")");
  }
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    const auto& r = requests_[i];
    if (r.id != i) throw InputError("request ids must be dense and in arrival order");
    if (r.atime < 0) throw InputError("negative arrival time for request " + std::to_string(i));
    if (i > 0 && r.atime < requests_[i - 1].atime) {
      throw InputError("non-monotone arrival times at request " + std::to_string(i));
    }
    if (r.pos >= space_.size()) {
      throw InputError("invalid position for request " + std::to_string(i));
    }
  }
}

Rational Instance::opt_cost_edge(RequestId u, RequestId v) const {
  const auto& a = requests_[u];
  const auto& b = requests_[v];
  return space_.induced_pair_distance(a.pos, b.pos) + (a.atime - b.atime).abs();
}

// ---------------------------------------------------------------------------
// Document format

namespace {

Rational rational_field(const json& node, const char* what) {
  if (!node.is_string()) throw InputError(std::string(what) + " must be a rational string");
  try {
    return Rational::parse(node.get<std::string>());
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

Instance from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("instance document must be an object");
  for (const char* field : {"k", "metric", "requests"}) {
    if (!doc.contains(field)) throw InputError(std::string("missing field '") + field + "'");
  }
  if (!doc["k"].is_number_integer()) throw InputError("k must be an integer");
  const int k = doc["k"].get<int>();
  if (k < 2) throw InputError("k must be at least 2");
  const Rational gamma = doc.contains("gamma") ? rational_field(doc["gamma"], "gamma") : Rational(1);

  const json& metric = doc["metric"];
  if (!metric.is_object() || !metric.contains("type") || !metric["type"].is_string()) {
    throw InputError("metric must be an object with a string 'type'");
  }
  const std::string type = metric["type"].get<std::string>();
  const json& reqs = doc["requests"];
  if (!reqs.is_array()) throw InputError("requests must be an array");

  std::vector<Request> requests;
  requests.reserve(reqs.size());

  if (type == "line") {
    std::vector<Rational> raw;
    for (const auto& r : reqs) {
      if (!r.is_object() || !r.contains("pos")) throw InputError("request without 'pos'");
      raw.push_back(rational_field(r["pos"], "pos"));
    }
    auto coords = raw;
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    auto space = MetricSpace::line(coords, k, gamma);
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      const auto& r = reqs[i];
      if (!r.contains("id") || !r["id"].is_number_integer() || !r.contains("atime")) {
        throw InputError("request needs integer 'id' and 'atime'");
      }
      const auto pos = static_cast<PointId>(
          std::lower_bound(coords.begin(), coords.end(), raw[i]) - coords.begin());
      requests.push_back({r["id"].get<RequestId>(), rational_field(r["atime"], "atime"), pos});
    }
    return Instance(std::move(space), std::move(requests));
  }

  if (type != "dmax" && type != "dhc") throw InputError("unknown metric type '" + type + "'");
  if (!metric.contains("n") || !metric["n"].is_number_integer() || !metric.contains("dist")) {
    throw InputError("explicit metric needs integer 'n' and 'dist'");
  }
  const auto n = metric["n"].get<std::size_t>();
  const json& rows = metric["dist"];
  if (!rows.is_array() || rows.size() != n) throw InputError("dist must have n rows");
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != i) {
      throw InputError("dist row " + std::to_string(i) + " must have " + std::to_string(i) +
                       " entries");
    }
    for (std::size_t j = 0; j < i; ++j) {
      dist[i][j] = dist[j][i] = rational_field(rows[i][j], "dist entry");
    }
  }
  BasePairMetric base(std::move(dist));
  auto space = type == "dmax" ? MetricSpace::dmax(std::move(base), k, gamma)
                              : MetricSpace::dhc(std::move(base), k, gamma);
  for (const auto& r : reqs) {
    if (!r.is_object() || !r.contains("id") || !r["id"].is_number_integer() ||
        !r.contains("atime") || !r.contains("pos") || !r["pos"].is_number_integer()) {
      throw InputError("request needs integer 'id', 'atime' and integer 'pos'");
    }
    if (r["pos"].get<long long>() < 0) throw InputError("invalid position");
    requests.push_back(
        {r["id"].get<RequestId>(), rational_field(r["atime"], "atime"), r["pos"].get<PointId>()});
  }
  return Instance(std::move(space), std::move(requests));
}

}  // namespace

Instance load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad document: ") + e.what());
  }
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

std::string save_instance(const Instance& instance) {
  const auto& space = instance.space();
  ordered_json doc;
  doc["k"] = instance.k();
  doc["gamma"] = space.gamma().str();
  ordered_json metric;
  metric["type"] = to_string(space.kind());
  if (space.kind() != MetricKind::line_diameter) {
    metric["n"] = space.size();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t j = 0; j < i; ++j) row.push_back(space.base()(i, j).str());
      rows.push_back(std::move(row));
    }
    metric["dist"] = std::move(rows);
  }
  doc["metric"] = std::move(metric);
  ordered_json reqs = ordered_json::array();
  for (const auto& r : instance.requests()) {
    ordered_json item;
    item["id"] = r.id;
    item["atime"] = r.atime.str();
    if (space.kind() == MetricKind::line_diameter) {
      item["pos"] = space.coords()[r.pos].str();
    } else {
      item["pos"] = r.pos;
    }
    reqs.push_back(std::move(item));
  }
  doc["requests"] = std::move(reqs);
  return doc.dump(2) + "\n";
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << save_instance(instance);
}

// ---------------------------------------------------------------------------
// Generators

Instance gen_adversarial_line(int k, int s, const Rational& epsilon, const Rational& spacing) {
  if (k < 2 || s < 1) throw InputError("adversarial instance needs k >= 2 and s >= 1");
  if (epsilon <= 0) throw InputError("epsilon must be positive");
  if (spacing <= 0) throw InputError("spacing must be positive");
  std::vector<Rational> coords;
  for (int j = 0; j < k; ++j) coords.push_back(spacing * j);
  std::vector<Request> requests;
  const int batches = s * k;
  for (int i = 1; i <= batches; ++i) {
    const Rational t = i == 1 ? Rational(0) : Rational(1) + Rational(2 * i - 3) * epsilon;
    for (int j = 0; j < k; ++j) {
      requests.push_back({requests.size(), t, static_cast<PointId>(j)});
    }
  }
  return Instance(MetricSpace::line(std::move(coords), k), std::move(requests));
}

Instance gen_random(RandomKind kind, int k, std::size_t m, std::uint64_t seed,
                    const RandomParams& params) {
  if (k < 2) throw InputError("k must be at least 2");
  if (m % static_cast<std::size_t>(k) != 0) throw InputError("m must be a multiple of k");
  if (params.horizon < 0 || params.span < 0) throw InputError("span and horizon must be >= 0");
  std::mt19937_64 rng(seed);

  std::uniform_int_distribution<std::int64_t> arrival(0, params.horizon);
  std::vector<std::int64_t> times(m);
  for (auto& t : times) t = arrival(rng);
  std::sort(times.begin(), times.end());

  std::vector<Request> requests;
  if (kind == RandomKind::line_uniform) {
    std::uniform_int_distribution<std::int64_t> coord(0, params.span);
    std::vector<std::int64_t> raw(m);
    for (auto& x : raw) x = coord(rng);
    auto distinct = raw;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<Rational> coords(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i < m; ++i) {
      const auto pos = static_cast<PointId>(
          std::lower_bound(distinct.begin(), distinct.end(), raw[i]) - distinct.begin());
      requests.push_back({i, times[i], pos});
    }
    return Instance(MetricSpace::line(std::move(coords), k), std::move(requests));
  }

  if (params.points < 1) throw InputError("explicit_random needs at least one point");
  if (params.max_weight < 1) throw InputError("max_weight must be >= 1");
  if (params.metric == MetricKind::line_diameter) {
    throw InputError("explicit_random builds dmax or dhc spaces");
  }
  const std::size_t n = params.points;
  BasePairMetric base = random_base_metric(n, params.max_weight, rng);
  std::uniform_int_distribution<PointId> point(0, n - 1);
  for (std::size_t i = 0; i < m; ++i) requests.push_back({i, times[i], point(rng)});
  auto space = params.metric == MetricKind::dmax_over_base ? MetricSpace::dmax(std::move(base), k)
                                                           : MetricSpace::dhc(std::move(base), k);
  return Instance(std::move(space), std::move(requests));
}

}  // namespace kmpmd
