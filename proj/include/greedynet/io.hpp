#pragma once

// File formats: point sets (JSON, CSV), metric matrices, profiles and
// networks, JSON-lines traces, reports, DOT and SVG.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "greedynet/directed_game.hpp"
#include "greedynet/equilibrium.hpp"
#include "greedynet/instances.hpp"
#include "greedynet/undirected_game.hpp"

namespace greedynet::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

inline Json parse_json(const std::string& text, const std::string& what = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + what + ": " + e.what());
  }
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// Numbers.

inline std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Strings are parsed exactly. Binary floats are read back through their
/// shortest round-trip decimal form, which is the literal the file contained.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(boost::multiprecision::cpp_int(j.get<std::uint64_t>()));
    return Rational(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    if (ec != std::errc()) throw InvalidInput("unrepresentable number");
    return parse_rational(std::string(buf, end));
  }
  throw InvalidInput("expected a number, got " + j.dump());
}

namespace detail {

inline boost::multiprecision::cpp_int pow10(int k) {
  boost::multiprecision::cpp_int p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return p;
}

// Smallest k with r * 10^k integral, or nullopt above `limit`.
inline std::optional<int> decimal_places(const Rational& r, int limit) {
  for (int k = 0; k <= limit; ++k)
    if (denominator(r * Rational(pow10(k))) == 1) return k;
  return std::nullopt;
}

inline std::int64_t to_scaled(const Rational& r, int scale, const std::string& where) {
  Rational s = r * Rational(pow10(scale));
  if (denominator(s) != 1)
    throw InvalidInput(where + ": value " + rational_to_string(r) + " needs more than " + std::to_string(scale) +
                       " decimal places");
  auto v = numerator(s);
  if (v >= kCoordinateLimit || v <= -kCoordinateLimit) throw InvalidInput(where + ": coordinate out of range");
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Fixed-point value v / 10^scale as a decimal string.
inline std::string scaled_to_decimal(std::int64_t v, int scale) {
  if (scale <= 0) return std::to_string(v);
  bool neg = v < 0;
  std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  std::string digits = std::to_string(mag);
  if (digits.size() <= std::size_t(scale)) digits.insert(0, std::size_t(scale) + 1 - digits.size(), '0');
  digits.insert(digits.size() - std::size_t(scale), ".");
  return (neg ? "-" : "") + digits;
}

// ---------------------------------------------------------------------------
// Point sets and metrics.

inline constexpr int kMaxScale = 12;

/// Coordinates are written in real units; integers when the scale is 0 and
/// exact decimal strings otherwise.
inline Json points_to_json(const MetricSpace& space) {
  if (!space.is_euclidean()) throw InvalidInput("points_to_json needs a Euclidean space");
  Json pts = Json::array();
  for (Agent u = 0; u < space.size(); ++u) {
    Json p = Json::array();
    for (auto c : space.point(u)) {
      if (space.scale() == 0)
        p.push_back(c);
      else
        p.push_back(scaled_to_decimal(c, space.scale()));
    }
    pts.push_back(std::move(p));
  }
  Json j;
  j["dimension"] = space.dimension();
  j["scale"] = space.scale();
  j["points"] = std::move(pts);
  if (!space.labels().empty()) j["labels"] = space.labels();
  return j;
}

namespace detail {

inline MetricSpace points_from_values(std::size_t dimension, const std::vector<std::vector<Rational>>& values,
                                      std::optional<int> scale, std::vector<std::string> labels) {
  int s = 0;
  if (scale) {
    if (*scale < 0 || *scale > kMaxScale) throw InvalidInput("scale must lie in [0, " + std::to_string(kMaxScale) + "]");
    s = *scale;
  } else {
    for (auto& row : values)
      for (auto& v : row) {
        auto k = decimal_places(v, kMaxScale);
        if (!k) throw InvalidInput("coordinate " + rational_to_string(v) + " is not a finite decimal");
        s = std::max(s, *k);
      }
  }
  std::vector<std::vector<std::int64_t>> pts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::int64_t> p;
    for (auto& v : values[i]) p.push_back(to_scaled(v, s, "point " + std::to_string(i)));
    pts.push_back(std::move(p));
  }
  return MetricSpace::euclidean(dimension, pts, s, std::move(labels));
}

}  // namespace detail

inline MetricSpace points_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
    throw InvalidInput("point file needs a \"points\" array");
  std::vector<std::vector<Rational>> values;
  for (auto& p : j["points"]) {
    if (!p.is_array()) throw InvalidInput("each point must be an array of coordinates");
    std::vector<Rational> row;
    for (auto& c : p) row.push_back(rational_from_json(c));
    values.push_back(std::move(row));
  }
  std::size_t dimension = 0;
  if (j.contains("dimension")) {
    if (!j["dimension"].is_number_unsigned()) throw InvalidInput("\"dimension\" must be a positive integer");
    dimension = j["dimension"].get<std::size_t>();
  } else if (!values.empty()) {
    dimension = values.front().size();
  } else {
    throw InvalidInput("empty point file needs a \"dimension\"");
  }
  std::optional<int> scale;
  if (j.contains("scale")) {
    if (!j["scale"].is_number_integer()) throw InvalidInput("\"scale\" must be an integer");
    scale = j["scale"].get<int>();
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return detail::points_from_values(dimension, values, scale, std::move(labels));
}

/// One point per row. A first row that does not parse as numbers is a header.
inline MetricSpace points_from_csv(const std::string& text, std::optional<int> scale = std::nullopt) {
  std::vector<std::vector<Rational>> values;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<Rational> p;
    std::istringstream fields(line);
    std::string f;
    try {
      while (std::getline(fields, f, ',')) {
        auto b = f.find_first_not_of(" \t"), e = f.find_last_not_of(" \t");
        p.push_back(parse_rational(b == std::string::npos ? "" : f.substr(b, e - b + 1)));
      }
    } catch (const InvalidInput& err) {
      if (values.empty() && row == 1) continue;
      throw InvalidInput("CSV row " + std::to_string(row) + ": " + err.what());
    }
    if (!values.empty() && p.size() != values.front().size())
      throw InvalidInput("CSV row " + std::to_string(row) + " has " + std::to_string(p.size()) + " fields, expected " +
                         std::to_string(values.front().size()));
    values.push_back(std::move(p));
  }
  if (values.empty()) throw InvalidInput("CSV file has no points");
  return detail::points_from_values(values.front().size(), values, scale, {});
}

inline std::string points_to_csv(const MetricSpace& space) {
  if (!space.is_euclidean()) throw InvalidInput("points_to_csv needs a Euclidean space");
  std::string out;
  for (std::size_t k = 0; k < space.dimension(); ++k) out += (k ? ",x" : "x") + std::to_string(k);
  out += "\n";
  for (Agent u = 0; u < space.size(); ++u) {
    auto p = space.point(u);
    for (std::size_t k = 0; k < p.size(); ++k) out += (k ? "," : "") + scaled_to_decimal(p[k], space.scale());
    out += "\n";
  }
  return out;
}

inline Json metric_to_json(const MetricSpace& space) {
  if (space.is_euclidean()) throw InvalidInput("metric_to_json needs a general metric space");
  Json dist = Json::array();
  for (auto& row : space.distance_matrix()) {
    Json r = Json::array();
    for (auto& d : row) r.push_back(rational_to_string(d));
    dist.push_back(std::move(r));
  }
  Json j;
  j["n"] = space.size();
  j["dist"] = std::move(dist);
  return j;
}

inline MetricSpace metric_from_json(const Json& j, bool skip_validation = false) {
  if (!j.is_object() || !j.contains("dist") || !j["dist"].is_array())
    throw InvalidInput("metric file needs a \"dist\" matrix");
  std::vector<std::vector<Rational>> dist;
  for (auto& row : j["dist"]) {
    if (!row.is_array()) throw InvalidInput("metric rows must be arrays");
    std::vector<Rational> r;
    for (auto& d : row) r.push_back(rational_from_json(d));
    dist.push_back(std::move(r));
  }
  if (j.contains("n") && j["n"].get<std::size_t>() != dist.size())
    throw InvalidInput("\"n\" does not match the matrix size");
  return MetricSpace::general(std::move(dist), skip_validation);
}

inline Json space_to_json(const MetricSpace& space) {
  return space.is_euclidean() ? points_to_json(space) : metric_to_json(space);
}

inline MetricSpace space_from_json(const Json& j) {
  if (j.is_object() && j.contains("dist")) return metric_from_json(j);
  return points_from_json(j);
}

inline MetricSpace load_space(const std::string& path) {
  auto text = read_file(path);
  if (ends_with(path, ".csv")) return points_from_csv(text);
  return space_from_json(parse_json(text, path));
}

inline void save_space(const std::string& path, const MetricSpace& space) {
  if (ends_with(path, ".csv"))
    write_file(path, points_to_csv(space));
  else
    write_file(path, space_to_json(space).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Profiles and networks.

inline Json strategies_to_json(const StrategyProfile& p) {
  Json s = Json::object();
  for (Agent u = 0; u < p.size(); ++u) s[std::to_string(u)] = p.strategy(u);
  return s;
}

inline Json profile_to_json(const StrategyProfile& p) {
  Json j;
  j["variant"] = to_string(p.variant());
  j["n"] = p.size();
  j["strategies"] = strategies_to_json(p);
  return j;
}

namespace detail {

inline Agent agent_key(const std::string& key, std::size_t n) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(key, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != key.size() || key.empty() || v >= n) throw InvalidInput("bad agent key '" + key + "'");
  return static_cast<Agent>(v);
}

inline std::size_t header_size(const Json& j) {
  if (!j.is_object() || !j.contains("variant") || !j.contains("n"))
    throw InvalidInput("graph file needs \"variant\" and \"n\"");
  if (!j["n"].is_number_unsigned()) throw InvalidInput("\"n\" must be a non-negative integer");
  return j["n"].get<std::size_t>();
}

inline StrategyProfile strategies_from_json(Variant variant, std::size_t n, const Json& s) {
  if (!s.is_object()) throw InvalidInput("\"strategies\" must be an object keyed by agent");
  StrategyProfile p(variant, n);
  for (auto& [key, value] : s.items()) {
    Agent u = agent_key(key, n);
    if (!value.is_array()) throw InvalidInput("strategy of agent " + key + " must be an array");
    std::vector<Agent> endpoints;
    for (auto& v : value) {
      if (!v.is_number_unsigned()) throw InvalidInput("strategy endpoints must be agent indices");
      endpoints.push_back(v.get<Agent>());
    }
    p.set_strategy(u, std::move(endpoints));
  }
  return p;
}

}  // namespace detail

inline StrategyProfile profile_from_json(const Json& j) {
  std::size_t n = detail::header_size(j);
  Variant variant = parse_variant(j["variant"].get<std::string>());
  if (!j.contains("strategies")) throw InvalidInput("profile file needs \"strategies\"");
  return detail::strategies_from_json(variant, n, j["strategies"]);
}

/// Networks with an owner on every edge are written as strategies, others
/// as a plain edge list.
inline Json network_to_json(const Network& net) {
  if (net.edge_count() == 0 || net.has_full_ownership()) {
    StrategyProfile p = net.edge_count() == 0 ? StrategyProfile(net.variant(), net.size()) : net.to_profile();
    return profile_to_json(p);
  }
  Json j;
  j["variant"] = to_string(net.variant());
  j["n"] = net.size();
  Json es = Json::array();
  for (auto& e : net.edges()) es.push_back({e.a, e.b});
  j["edges"] = std::move(es);
  return j;
}

inline Network network_from_json(const Json& j) {
  std::size_t n = detail::header_size(j);
  Variant variant = parse_variant(j["variant"].get<std::string>());
  if (j.contains("strategies")) return induce_network(detail::strategies_from_json(variant, n, j["strategies"]));
  if (!j.contains("edges") || !j["edges"].is_array()) throw InvalidInput("graph file needs \"strategies\" or \"edges\"");
  Network net(variant, n);
  for (auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw InvalidInput("edges must be [a, b] index pairs");
    net.add_edge(e[0].get<Agent>(), e[1].get<Agent>());
  }
  return net;
}

// ---------------------------------------------------------------------------
// Traces (JSON lines).

inline Json cost_to_json(const Cost& c) { return c.is_infinite() ? Json("inf") : Json(*c.edges); }

inline Cost cost_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return Cost::infinite();
  if (j.is_number_unsigned()) return Cost::finite(j.get<std::size_t>());
  throw InvalidInput("bad cost value " + j.dump());
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t parse_hex64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidInput("bad fingerprint '" + s + "'");
  return v;
}

inline std::string dynamics_trace_to_jsonl(const DynamicsTrace& t) {
  std::string out;
  Json head;
  head["record"] = "header";
  head["kind"] = "dynamics";
  head["schedule"] = t.schedule;
  head["variant"] = to_string(t.variant);
  head["n"] = t.profiles.empty() ? 0 : t.profiles.front().size();
  head["initial"] = t.profiles.empty() ? Json::object() : strategies_to_json(t.profiles.front());
  out += head.dump() + "\n";
  for (auto& e : t.events) {
    Json j;
    j["record"] = "event";
    j["step"] = e.step;
    j["round"] = e.round;
    j["agent"] = e.agent;
    j["old_size"] = e.old_strategy.size();
    j["new_size"] = e.new_strategy.size();
    j["old_cost"] = cost_to_json(e.old_cost);
    j["new_cost"] = cost_to_json(e.new_cost);
    j["old_strategy"] = e.old_strategy;
    j["new_strategy"] = e.new_strategy;
    j["changed"] = e.changed;
    j["fingerprint"] = hex64(e.fingerprint);
    out += j.dump() + "\n";
  }
  Json tail;
  tail["record"] = "status";
  tail["status"] = to_string(t.status);
  tail["moves"] = t.moves();
  if (t.status == DynamicsStatus::CycleDetected) {
    tail["cycle_start"] = t.cycle_start;
    tail["cycle_end"] = t.cycle_end;
  }
  tail["certified"] = t.certified;
  out += tail.dump() + "\n";
  return out;
}

namespace detail {

inline std::vector<Json> parse_jsonl(const std::string& text) {
  std::vector<Json> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(parse_json(line, "trace line " + std::to_string(row)));
  }
  if (lines.empty()) throw InvalidInput("empty trace");
  return lines;
}

inline DynamicsStatus parse_status(const std::string& s) {
  if (s == "converged") return DynamicsStatus::Converged;
  if (s == "cycle") return DynamicsStatus::CycleDetected;
  if (s == "budget") return DynamicsStatus::BudgetExhausted;
  throw InvalidInput("unknown dynamics status '" + s + "'");
}

}  // namespace detail

/// Rebuilds the trace, replaying the recorded changes from the initial
/// profile to recover the visited profiles.
inline DynamicsTrace dynamics_trace_from_jsonl(const std::string& text) {
  auto lines = detail::parse_jsonl(text);
  auto& head = lines.front();
  if (head.value("kind", "") != "dynamics") throw InvalidInput("not a dynamics trace");
  DynamicsTrace t;
  t.schedule = head.at("schedule").get<std::string>();
  t.variant = parse_variant(head.at("variant").get<std::string>());
  StrategyProfile profile = detail::strategies_from_json(t.variant, head.at("n").get<std::size_t>(), head.at("initial"));
  t.profiles.push_back(profile);
  bool closed = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& j = lines[i];
    auto record = j.value("record", "");
    if (record == "event") {
      DynamicsEvent e;
      e.step = j.at("step").get<std::size_t>();
      e.round = j.at("round").get<std::size_t>();
      e.agent = j.at("agent").get<Agent>();
      e.old_cost = cost_from_json(j.at("old_cost"));
      e.new_cost = cost_from_json(j.at("new_cost"));
      e.old_strategy = j.at("old_strategy").get<std::vector<Agent>>();
      e.new_strategy = j.at("new_strategy").get<std::vector<Agent>>();
      e.changed = j.at("changed").get<bool>();
      e.fingerprint = parse_hex64(j.at("fingerprint").get<std::string>());
      if (e.changed) {
        profile.set_strategy(e.agent, e.new_strategy);
        profile.canonicalize();
        t.profiles.push_back(profile);
      }
      if (profile.fingerprint() != e.fingerprint)
        throw InvalidInput("trace fingerprint mismatch at step " + std::to_string(e.step));
      t.events.push_back(std::move(e));
    } else if (record == "status") {
      t.status = detail::parse_status(j.at("status").get<std::string>());
      t.cycle_start = j.value("cycle_start", std::size_t{0});
      t.cycle_end = j.value("cycle_end", std::size_t{0});
      t.certified = j.at("certified").get<bool>();
      closed = true;
    } else {
      throw InvalidInput("unknown trace record '" + record + "'");
    }
  }
  if (!closed) throw InvalidInput("trace has no status record");
  t.final_profile = profile;
  return t;
}

inline std::string algorithm_trace_to_jsonl(const AlgorithmTrace& t) {
  std::string out;
  Json head;
  head["record"] = "header";
  head["kind"] = "algorithm";
  head["mode"] = t.mode;
  head["delta_rule"] = t.delta_rule;
  head["initial_edges"] = t.initial_edges;
  head["filtered_edges"] = t.filtered_edges;
  head["delaunay_used"] = t.delaunay_used;
  head["iteration_bound"] = t.iteration_bound;
  out += head.dump() + "\n";
  for (auto& it : t.iterations) {
    Json j;
    j["record"] = "iteration";
    j["iteration"] = it.iteration;
    j["edges"] = it.edges;
    j["navigable"] = it.navigable;
    j["slack_removed"] = it.slack_removed;
    Json agents = Json::array();
    for (auto& a : it.agents) agents.push_back({a.critical, a.best, a.alpha, a.single_minus});
    j["agents"] = std::move(agents);
    j["flow_feasible"] = it.flow_feasible ? Json(*it.flow_feasible) : Json(nullptr);
    j["action"] = it.action;
    j["agent"] = it.agent ? Json(*it.agent) : Json(nullptr);
    j["notes"] = it.notes;
    out += j.dump() + "\n";
  }
  Json tail;
  tail["record"] = "status";
  tail["certified"] = t.certified;
  tail["relaxed_slack"] = t.relaxed_slack;
  out += tail.dump() + "\n";
  return out;
}

inline AlgorithmTrace algorithm_trace_from_jsonl(const std::string& text) {
  auto lines = detail::parse_jsonl(text);
  auto& head = lines.front();
  if (head.value("kind", "") != "algorithm") throw InvalidInput("not an algorithm trace");
  AlgorithmTrace t;
  t.mode = head.at("mode").get<std::string>();
  t.delta_rule = head.at("delta_rule").get<std::string>();
  t.initial_edges = head.at("initial_edges").get<std::size_t>();
  t.filtered_edges = head.at("filtered_edges").get<std::size_t>();
  t.delaunay_used = head.at("delaunay_used").get<bool>();
  t.iteration_bound = head.at("iteration_bound").get<std::size_t>();
  bool closed = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto& j = lines[i];
    auto record = j.value("record", "");
    if (record == "iteration") {
      IterationRecord it;
      it.iteration = j.at("iteration").get<std::size_t>();
      it.edges = j.at("edges").get<std::size_t>();
      it.navigable = j.at("navigable").get<bool>();
      it.slack_removed = j.at("slack_removed").get<std::size_t>();
      for (auto& a : j.at("agents")) {
        auto v = a.get<std::vector<std::size_t>>();
        if (v.size() != 4) throw InvalidInput("iteration agent stats need four values");
        it.agents.push_back({v[0], v[1], v[2], v[3]});
      }
      if (!j.at("flow_feasible").is_null()) it.flow_feasible = j["flow_feasible"].get<bool>();
      it.action = j.at("action").get<std::string>();
      if (!j.at("agent").is_null()) it.agent = j["agent"].get<Agent>();
      it.notes = j.at("notes").get<std::vector<std::string>>();
      t.iterations.push_back(std::move(it));
    } else if (record == "status") {
      t.certified = j.at("certified").get<bool>();
      t.relaxed_slack = j.at("relaxed_slack").get<std::size_t>();
      closed = true;
    } else {
      throw InvalidInput("unknown trace record '" + record + "'");
    }
  }
  if (!closed) throw InvalidInput("trace has no status record");
  return t;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json rational_json(const Rational& r) {
  Json j;
  j["exact"] = rational_to_string(r);
  j["decimal"] = r.convert_to<double>();
  return j;
}

inline Json equilibrium_report_to_json(const EquilibriumReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["criterion"] = r.criterion.describe();
  j["certified"] = r.certified;
  j["fast_path"] = r.fast_path;
  j["first_violation"] = r.first_violation ? Json(*r.first_violation) : Json(nullptr);
  Json agents = Json::array();
  for (auto& a : r.agents) {
    Json w;
    w["agent"] = a.agent;
    w["current"] = cost_to_json(a.current);
    w["best"] = cost_to_json(a.best);
    w["best_strategy"] = a.best_strategy;
    w["improving"] = a.improving;
    agents.push_back(std::move(w));
  }
  j["agents"] = std::move(agents);
  return j;
}

inline Json poa_report_to_json(const PoaReport& r) {
  Json j;
  j["variant"] = to_string(r.variant);
  j["equilibrium_cost"] = r.equilibrium_cost;
  j["optimum"] = r.optimum ? Json(*r.optimum) : Json(nullptr);
  j["lower_bound"] = r.lower_bound;
  j["ratio"] = r.ratio_exact ? rational_json(*r.ratio_exact) : Json(nullptr);
  j["ratio_vs_lower_bound"] = rational_json(r.ratio_lower);
  j["bound"] = rational_json(r.bound);
  j["bound_label"] = r.bound_label;
  j["bound_violated"] = r.bound_violated;
  if (!r.stability.empty()) j["stability"] = r.stability;
  return j;
}

inline Json social_optimum_to_json(const SocialOptimum& so) {
  Json j;
  j["variant"] = to_string(so.variant);
  j["cost"] = so.cost;
  j["search_nodes"] = so.nodes;
  j["network"] = network_to_json(so.network);
  return j;
}

// ---------------------------------------------------------------------------
// Instance specs.

inline Json instance_spec_to_json(const InstanceSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["n"] = s.n;
  j["dimension"] = s.dimension;
  j["side"] = s.side;
  j["clusters"] = s.clusters;
  j["spread"] = s.spread;
  j["positions"] = s.positions;
  j["sets"] = s.sets;
  j["family"] = s.family;
  j["replicas"] = s.replicas;
  j["seed"] = s.seed;
  j["scale"] = s.scale;
  return j;
}

inline InstanceSpec instance_spec_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("instance spec must be a JSON object");
  InstanceSpec s;
  try {
    s.kind = parse_instance_kind(j.at("kind").get<std::string>());
    s.n = j.value("n", s.n);
    s.dimension = j.value("dimension", s.dimension);
    s.side = j.value("side", s.side);
    s.clusters = j.value("clusters", s.clusters);
    s.spread = j.value("spread", s.spread);
    s.positions = j.value("positions", s.positions);
    s.sets = j.value("sets", s.sets);
    s.family = j.value("family", s.family);
    s.replicas = j.value("replicas", s.replicas);
    s.seed = j.value("seed", s.seed);
    s.scale = j.value("scale", s.scale);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("bad instance spec: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// DOT.

/// Undirected owned edges are drawn from the owner with an arrowhead; NNG
/// edges are red.
inline std::string to_dot(const Network& net, const MetricSpace& space) {
  if (net.size() != space.size()) throw InvalidInput("network size does not match the space");
  auto nng = build_nng(space);
  const bool directed = net.directed();
  std::ostringstream os;
  os << (directed ? "digraph" : "graph") << " greedynet {\n  node [shape=circle];\n";
  for (Agent u = 0; u < net.size(); ++u) {
    std::string label;
    for (char c : space.labels().empty() ? std::to_string(u) : space.labels()[u]) {
      if (c == '"' || c == '\\') label += '\\';
      label += c;
    }
    os << "  " << u << " [label=\"" << label << "\"";
    if (space.is_euclidean() && space.dimension() <= 2) {
      auto p = space.point(u);
      os << ", pos=\"" << scaled_to_decimal(p[0], space.scale()) << ","
         << (p.size() > 1 ? scaled_to_decimal(p[1], space.scale()) : "0") << "\"";
    }
    os << "];\n";
  }
  for (auto& e : net.edges()) {
    Agent from = e.a, to = e.b;
    auto owner = net.owner(e);
    if (!directed && owner) {
      from = *owner;
      to = other_end(e, *owner);
    }
    std::vector<std::string> attrs;
    if (!directed && owner) attrs.push_back("dir=forward");
    if (nng.adjacent(e.a, e.b)) attrs.push_back("color=red");
    os << "  " << from << (directed ? " -> " : " -- ") << to;
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG.

struct SvgStyle {
  double size = 800;
  double margin = 40;
  double node_radius = 6;
  bool labels = true;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

// Layout in abstract coordinates, y pointing up.
inline std::vector<std::pair<double, double>> layout(const MetricSpace& space, std::vector<std::string>* warnings) {
  const std::size_t n = space.size();
  std::vector<std::pair<double, double>> pos(n);
  if (!space.is_euclidean()) {
    if (warnings) warnings->push_back("general metric drawn on a circle; distances are not to scale");
    const double pi = std::acos(-1.0);
    for (Agent u = 0; u < n; ++u) {
      double a = 2 * pi * double(u) / double(std::max<std::size_t>(n, 1));
      pos[u] = {std::cos(a), std::sin(a)};
    }
    return pos;
  }
  if (space.dimension() > 2 && warnings)
    warnings->push_back("dimension " + std::to_string(space.dimension()) + " projected onto the first two coordinates");
  for (Agent u = 0; u < n; ++u) {
    auto p = space.point(u);
    pos[u] = {double(p[0]), p.size() > 1 ? double(p[1]) : 0.0};
  }
  return pos;
}

}  // namespace detail

/// Deterministic SVG 1.1 drawing. Edges owned by an agent carry a square
/// marker near the owner's end.
inline std::string to_svg(const Network& net, const MetricSpace& space, const SvgStyle& style = {},
                          std::vector<std::string>* warnings = nullptr) {
  if (net.size() != space.size()) throw InvalidInput("network size does not match the space");
  const std::size_t n = space.size();
  auto pos = detail::layout(space, warnings);
  double minx = 0, maxx = 0, miny = 0, maxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto [x, y] = pos[i];
    if (i == 0 || x < minx) minx = x;
    if (i == 0 || x > maxx) maxx = x;
    if (i == 0 || y < miny) miny = y;
    if (i == 0 || y > maxy) maxy = y;
  }
  const double inner = style.size - 2 * style.margin;
  double span = std::max(maxx - minx, maxy - miny);
  double k = span > 0 ? inner / span : 0;
  double offx = style.margin + (inner - (maxx - minx) * k) / 2;
  double offy = style.margin + (inner - (maxy - miny) * k) / 2;
  auto px = [&](Agent u) { return offx + (pos[u].first - minx) * k; };
  auto py = [&](Agent u) { return style.size - (offy + (pos[u].second - miny) * k); };

  auto nng = n >= 2 ? std::optional<NngGraph>(build_nng(space)) : std::nullopt;
  std::ostringstream os;
  const std::string sz = detail::fmt2(style.size);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << sz << "\" height=\"" << sz
     << "\" viewBox=\"0 0 " << sz << " " << sz << "\">\n"
     << "<style>line.edge{stroke:#777;stroke-width:1.5}line.nng{stroke:#c0392b;stroke-width:3}"
        "rect.owner{fill:#222}circle.node{fill:#fff;stroke:#222;stroke-width:1.5}"
        "text{font-family:sans-serif;font-size:11px}</style>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << sz << "\" height=\"" << sz << "\" fill=\"white\"/>\n";
  for (auto& e : net.edges()) {
    bool is_nng = nng && nng->adjacent(e.a, e.b);
    os << "<line class=\"" << (is_nng ? "nng" : "edge") << "\" x1=\"" << detail::fmt2(px(e.a)) << "\" y1=\""
       << detail::fmt2(py(e.a)) << "\" x2=\"" << detail::fmt2(px(e.b)) << "\" y2=\"" << detail::fmt2(py(e.b))
       << "\"/>\n";
  }
  for (auto& e : net.edges()) {
    auto owner = net.owner(e);
    if (!owner) continue;
    Agent o = *owner, v = other_end(e, o);
    double dx = px(v) - px(o), dy = py(v) - py(o), len = std::hypot(dx, dy);
    double t = len > 0 ? std::min(0.5, (style.node_radius + 5) / len) : 0;
    double mx = px(o) + dx * t, my = py(o) + dy * t;
    os << "<rect class=\"owner\" x=\"" << detail::fmt2(mx - 3) << "\" y=\"" << detail::fmt2(my - 3)
       << "\" width=\"6.00\" height=\"6.00\"/>\n";
  }
  for (Agent u = 0; u < n; ++u) {
    os << "<circle class=\"node\" cx=\"" << detail::fmt2(px(u)) << "\" cy=\"" << detail::fmt2(py(u)) << "\" r=\""
       << detail::fmt2(style.node_radius) << "\"/>\n";
    if (style.labels)
      os << "<text x=\"" << detail::fmt2(px(u) + style.node_radius + 2) << "\" y=\""
         << detail::fmt2(py(u) - style.node_radius - 2) << "\">"
         << (space.labels().empty() ? std::to_string(u) : detail::xml_escape(space.labels()[u])) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace greedynet::io
