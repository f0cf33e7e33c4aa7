#pragma once

// Exact point sets and metric spaces. Every distance comparison in the library
// goes through MetricSpace, either through the exact comparison routines or
// through the per-target rank table built from them at construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace greedynet {

using Agent = std::size_t;
using Rational = boost::multiprecision::cpp_rational;
using Wide = __int128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (bad indices, duplicate points, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Raised when an internal invariant that should be impossible is observed.
class InvariantFault : public Error {
 public:
  using Error::Error;
};

enum class Ordering { Less, Equal, Greater };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
  }
  return "?";
}

template <typename T>
Ordering order_of(const T& a, const T& b) {
  if (a < b) return Ordering::Less;
  if (b < a) return Ordering::Greater;
  return Ordering::Equal;
}

/// Kissing numbers known exactly for small dimensions. Dimension 4 is the
/// literature value 24; above 4 no exact cap is used.
inline std::optional<std::size_t> kissing_number(std::size_t dimension) {
  switch (dimension) {
    case 1: return 2;
    case 2: return 6;
    case 3: return 12;
    case 4: return 24;
    default: return std::nullopt;
  }
}

/// Coordinates are bounded so that squared distances fit in 128 bits and the
/// 2D incircle determinant fits in 256 bits.
inline constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 40;

struct MetricViolation {
  enum class Kind { NonZeroDiagonal, NonPositive, Asymmetric, Triangle };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::NonZeroDiagonal: os << "d(" << i << "," << i << ") != 0"; break;
      case Kind::NonPositive: os << "d(" << i << "," << j << ") <= 0"; break;
      case Kind::Asymmetric: os << "d(" << i << "," << j << ") != d(" << j << "," << i << ")"; break;
      case Kind::Triangle:
        os << "d(" << i << "," << k << ") > d(" << i << "," << j << ") + d(" << j << "," << k << ")";
        break;
    }
    return os.str();
  }
};

struct ValidationReport {
  std::optional<std::string> structural_error;
  std::vector<MetricViolation> violations;

  bool valid() const { return !structural_error && violations.empty(); }
};

/// Checks the metric axioms on a distance matrix. Non-square input is a
/// structural error and no axioms are checked.
inline ValidationReport validate_metric(const std::vector<std::vector<Rational>>& dist) {
  ValidationReport report;
  const std::size_t n = dist.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      report.structural_error = "row " + std::to_string(i) + " has " + std::to_string(dist[i].size()) +
                                " entries, expected " + std::to_string(n);
      return report;
    }
  }
  using Kind = MetricViolation::Kind;
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) report.violations.push_back({Kind::NonZeroDiagonal, i, i, i});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i][j] <= 0 || dist[j][i] <= 0) report.violations.push_back({Kind::NonPositive, i, j, j});
      if (dist[i][j] != dist[j][i]) report.violations.push_back({Kind::Asymmetric, i, j, j});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        if (dist[i][k] > dist[i][j] + dist[j][k]) report.violations.push_back({Kind::Triangle, i, j, k});
      }
  return report;
}

class MetricSpace {
 public:
  MetricSpace() = default;

  static MetricSpace euclidean(std::size_t dimension, const std::vector<std::vector<std::int64_t>>& points,
                               int scale = 0, std::vector<std::string> labels = {}) {
    if (dimension == 0) throw InvalidInput("dimension must be at least 1");
    if (!labels.empty() && labels.size() != points.size())
      throw InvalidInput("label count does not match point count");
    MetricSpace s;
    s.euclidean_ = true;
    s.dimension_ = dimension;
    s.scale_ = scale;
    s.n_ = points.size();
    s.labels_ = std::move(labels);
    s.coords_.reserve(points.size() * dimension);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != dimension)
        throw InvalidInput("point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                           " coordinates, expected " + std::to_string(dimension));
      for (auto c : points[i]) {
        if (c >= kCoordinateLimit || c <= -kCoordinateLimit)
          throw InvalidInput("coordinate of point " + std::to_string(i) + " exceeds the supported range");
        s.coords_.push_back(c);
      }
    }
    std::vector<Agent> idx(s.n_);
    std::iota(idx.begin(), idx.end(), Agent{0});
    std::sort(idx.begin(), idx.end(), [&](Agent a, Agent b) {
      return std::lexicographical_compare(s.point(a).begin(), s.point(a).end(), s.point(b).begin(),
                                          s.point(b).end());
    });
    for (std::size_t i = 1; i < idx.size(); ++i) {
      auto p = s.point(idx[i - 1]), q = s.point(idx[i]);
      if (std::equal(p.begin(), p.end(), q.begin()))
        throw InvalidInput("duplicate points " + std::to_string(std::min(idx[i - 1], idx[i])) + " and " +
                           std::to_string(std::max(idx[i - 1], idx[i])));
    }
    s.build_rank_table();
    return s;
  }

  /// General metric from an explicit distance matrix. Validation is O(n^3);
  /// `skip_validation` bypasses it and is recorded on the space.
  static MetricSpace general(std::vector<std::vector<Rational>> dist, bool skip_validation = false) {
    if (!skip_validation) {
      auto report = validate_metric(dist);
      if (report.structural_error) throw InvalidInput("metric matrix: " + *report.structural_error);
      if (!report.violations.empty())
        throw InvalidInput("metric matrix violates " + report.violations.front().describe() + " (" +
                           std::to_string(report.violations.size()) + " violations)");
    } else {
      for (auto& row : dist)
        if (row.size() != dist.size()) throw InvalidInput("metric matrix is not square");
    }
    MetricSpace s;
    s.euclidean_ = false;
    s.validation_skipped_ = skip_validation;
    s.n_ = dist.size();
    s.dist_ = std::move(dist);
    s.build_rank_table();
    return s;
  }

  std::size_t size() const { return n_; }
  bool is_euclidean() const { return euclidean_; }
  /// 0 in general-metric mode.
  std::size_t dimension() const { return dimension_; }
  int scale() const { return scale_; }
  bool validation_skipped() const { return validation_skipped_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::span<const std::int64_t> point(Agent u) const {
    return {coords_.data() + u * dimension_, dimension_};
  }

  const Rational& metric_distance(Agent u, Agent v) const {
    check_index(u);
    check_index(v);
    if (euclidean_) throw Unsupported("metric_distance is only defined in general-metric mode");
    return dist_[u][v];
  }

  const std::vector<std::vector<Rational>>& distance_matrix() const { return dist_; }

  Wide distance_squared(Agent u, Agent v) const {
    check_index(u);
    check_index(v);
    if (!euclidean_) throw Unsupported("distance_squared is only defined in Euclidean mode");
    return raw_distance_squared(u, v);
  }

  /// Exact ordering of d(u,v) against d(x,y).
  Ordering compare_distances(Agent u, Agent v, Agent x, Agent y) const {
    check_index(u);
    check_index(v);
    check_index(x);
    check_index(y);
    if (euclidean_) return order_of(raw_distance_squared(u, v), raw_distance_squared(x, y));
    return order_of(dist_[u][v], dist_[x][y]);
  }

  /// True iff d(a, target) < d(b, target).
  bool closer(Agent target, Agent a, Agent b) const { return rank_[target * n_ + a] < rank_[target * n_ + b]; }

  /// Dense rank of d(x, target) among all distances to target (0 for target itself).
  std::uint32_t rank(Agent target, Agent x) const { return rank_[target * n_ + x]; }

  /// Agents sorted by distance to `target`, ties by index; target first.
  std::span<const Agent> by_distance(Agent target) const { return {order_.data() + target * n_, n_}; }

  /// Floating-point distance, for display only.
  double approx_distance(Agent u, Agent v) const {
    if (euclidean_) {
      double s = 0;
      for (std::size_t k = 0; k < dimension_; ++k) {
        double d = double(point(u)[k] - point(v)[k]);
        s += d * d;
      }
      return std::sqrt(s);
    }
    return dist_[u][v].convert_to<double>();
  }

  /// Upper bound on the minimum greedy routing set size: K(D) for D <= 4,
  /// otherwise n - 1.
  std::size_t routing_degree_bound() const {
    if (euclidean_) {
      if (auto k = kissing_number(dimension_)) return std::min(*k, n_ == 0 ? 0 : n_ - 1);
    }
    return n_ == 0 ? 0 : n_ - 1;
  }

  std::optional<std::size_t> kissing() const {
    return euclidean_ ? kissing_number(dimension_) : std::nullopt;
  }

  void check_index(Agent u) const {
    if (u >= n_) throw InvalidInput("agent index " + std::to_string(u) + " out of range (n=" + std::to_string(n_) + ")");
  }

  friend bool operator==(const MetricSpace& a, const MetricSpace& b) {
    return a.euclidean_ == b.euclidean_ && a.dimension_ == b.dimension_ && a.scale_ == b.scale_ && a.n_ == b.n_ &&
           a.coords_ == b.coords_ && a.dist_ == b.dist_ && a.labels_ == b.labels_;
  }

 private:
  Wide raw_distance_squared(Agent u, Agent v) const {
    Wide s = 0;
    const std::int64_t* p = coords_.data() + u * dimension_;
    const std::int64_t* q = coords_.data() + v * dimension_;
    for (std::size_t k = 0; k < dimension_; ++k) {
      Wide d = Wide(p[k]) - Wide(q[k]);
      s += d * d;
    }
    return s;
  }

  void build_rank_table() {
    rank_.assign(n_ * n_, 0);
    order_.assign(n_ * n_, 0);
    std::vector<Agent> idx(n_);
    for (Agent t = 0; t < n_; ++t) {
      std::iota(idx.begin(), idx.end(), Agent{0});
      if (euclidean_) {
        std::vector<Wide> d(n_);
        for (Agent x = 0; x < n_; ++x) d[x] = raw_distance_squared(t, x);
        std::stable_sort(idx.begin(), idx.end(), [&](Agent a, Agent b) { return d[a] < d[b]; });
        assign_ranks(t, idx, [&](Agent a, Agent b) { return d[a] == d[b]; });
      } else {
        const auto& row = dist_[t];
        std::stable_sort(idx.begin(), idx.end(), [&](Agent a, Agent b) { return row[a] < row[b]; });
        assign_ranks(t, idx, [&](Agent a, Agent b) { return row[a] == row[b]; });
      }
    }
  }

  template <typename Eq>
  void assign_ranks(Agent t, const std::vector<Agent>& sorted, Eq same) {
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i > 0 && !same(sorted[i - 1], sorted[i])) ++r;
      rank_[t * n_ + sorted[i]] = r;
      order_[t * n_ + i] = sorted[i];
    }
  }

  bool euclidean_ = true;
  bool validation_skipped_ = false;
  std::size_t dimension_ = 0;
  int scale_ = 0;
  std::size_t n_ = 0;
  std::vector<std::int64_t> coords_;
  std::vector<std::vector<Rational>> dist_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> rank_;
  std::vector<Agent> order_;
};

/// Exact rational from "p/q", an integer or a decimal string with optional
/// exponent.
inline Rational parse_rational(const std::string& raw) {
  std::string text = raw;
  if (text.empty()) throw InvalidInput("empty number");
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      Rational p(boost::multiprecision::cpp_int(text.substr(0, slash)));
      Rational q(boost::multiprecision::cpp_int(text.substr(slash + 1)));
      if (q == 0) throw InvalidInput("zero denominator in '" + raw + "'");
      return p / q;
    }
    long exponent = 0;
    auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
      std::size_t used = 0;
      exponent = std::stol(text.substr(e + 1), &used);
      if (used != text.size() - e - 1 || std::labs(exponent) > 4000)
        throw InvalidInput("malformed number '" + raw + "'");
      text = text.substr(0, e);
    }
    if (text.empty()) throw InvalidInput("malformed number '" + raw + "'");
    bool neg = text[0] == '-';
    if (neg || text[0] == '+') text = text.substr(1);
    auto dot = text.find('.');
    std::string whole = text.substr(0, dot), frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw InvalidInput("malformed number '" + raw + "'");
    for (char c : whole + frac)
      if (c < '0' || c > '9') throw InvalidInput("malformed number '" + raw + "'");
    boost::multiprecision::cpp_int num(whole.empty() ? "0" : whole), den(1);
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    for (; exponent > 0; --exponent) num *= 10;
    for (; exponent < 0; ++exponent) den *= 10;
    Rational r(num, den);
    return neg ? Rational(-r) : r;
  } catch (const std::logic_error&) {
    throw InvalidInput("malformed number '" + raw + "'");
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("malformed number '" + raw + "'");
  }
}

}  // namespace greedynet
