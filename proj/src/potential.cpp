#include "sturm/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "sturm/errors.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;

// Snap tolerance for table endpoints written in decimal.
constexpr double kEndpointTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// \int_0^U |cos u| du for U >= 0.
double abs_cos_integral(double upper) {
  const double periods = std::floor(upper / kPi);
  const double rem = upper - periods * kPi;
  const double partial = rem <= kPi / 2 ? std::sin(rem) : 2.0 - std::sin(rem);
  return 2.0 * periods + partial;
}

// b^e - a^e for 0 <= a <= b, accurate when a is close to b.
double power_difference(double a, double b, double e) {
  if (a <= 0.0) return std::pow(b, e);
  return -std::pow(b, e) * std::expm1(e * std::log1p((a - b) / b));
}

double table_integral(const kinds::Table& t, double a, double b) {
  double sum = 0.0;
  const Eigen::Index segments = t.x.size() - 1;
  for (Eigen::Index i = 0; i < segments; ++i) {
    const double x0 = t.x[i], x1 = t.x[i + 1];
    const double u = std::max(a, x0), v = std::min(b, x1);
    if (v <= u) continue;
    const double slope = (t.q[i + 1] - t.q[i]) / (x1 - x0);
    const double qu = t.q[i] + slope * (u - x0);
    const double qv = t.q[i] + slope * (v - x0);
    sum += 0.5 * (v - u) * (qu + qv);
  }
  return sum;
}

double table_l1(const kinds::Table& t) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < t.x.size(); ++i) {
    const double w = t.x[i + 1] - t.x[i];
    const double q0 = t.q[i], q1 = t.q[i + 1];
    if (q0 * q1 >= 0.0) {
      sum += 0.5 * w * std::abs(q0 + q1);
    } else {
      sum += 0.5 * w * (q0 * q0 + q1 * q1) / (std::abs(q0) + std::abs(q1));
    }
  }
  return sum;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

void validate(kinds::Table& t) {
  if (t.x.size() != t.q.size()) throw Error(ErrorCode::InvalidArgument, "table x/q size mismatch");
  if (t.x.size() < 2) throw Error(ErrorCode::InvalidArgument, "table needs at least two points");
  for (Eigen::Index i = 0; i < t.x.size(); ++i) {
    require_finite(t.x[i], "table abscissa");
    require_finite(t.q[i], "table value");
  }
  for (Eigen::Index i = 0; i + 1 < t.x.size(); ++i) {
    if (!(t.x[i + 1] > t.x[i])) {
      throw Error(ErrorCode::NonMonotoneTable,
                  "breakpoints must be strictly increasing (index " + std::to_string(i + 1) + ")");
    }
  }
  const Eigen::Index last = t.x.size() - 1;
  if (std::abs(t.x[0]) > kEndpointTol || std::abs(t.x[last] - kPi) > kEndpointTol) {
    throw Error(ErrorCode::DomainMismatch, "table must start at 0 and end at pi");
  }
  t.x[0] = 0.0;
  t.x[last] = kPi;
  if (!(t.x[1] > t.x[0]) || !(t.x[last] > t.x[last - 1])) {
    throw Error(ErrorCode::NonMonotoneTable, "breakpoints collapse at an endpoint");
  }
}

}  // namespace

Potential::Potential(Params params) : params_(std::move(params)) {
  l1_norm_ = std::visit(
      overloaded{
          [](const kinds::Zero&) { return 0.0; },
          [](const kinds::Constant& k) {
            require_finite(k.c, "constant value");
            return std::abs(k.c) * kPi;
          },
          [](const kinds::Cosine& k) {
            require_finite(k.a, "cosine amplitude");
            require_finite(k.f, "cosine frequency");
            const double f = std::abs(k.f);
            if (f == 0.0) return std::abs(k.a) * kPi;
            return std::abs(k.a) * abs_cos_integral(f * kPi) / f;
          },
          [](const kinds::Step& k) {
            require_finite(k.v, "step value");
            if (!(k.l >= 0.0 && k.r <= kPi)) {
              throw Error(ErrorCode::DomainMismatch, "step support must lie in [0, pi]");
            }
            if (!(k.l < k.r)) throw Error(ErrorCode::EmptyInterval, "step support needs l < r");
            return std::abs(k.v) * (k.r - k.l);
          },
          [](const kinds::Power& k) {
            require_finite(k.a, "power coefficient");
            if (!(k.p > -1.0) || !std::isfinite(k.p)) {
              throw Error(ErrorCode::NonIntegrableExponent,
                          "exponent p must satisfy p > -1 for x^p to be integrable on [0, pi]");
            }
            return std::abs(k.a) * std::pow(kPi, k.p + 1.0) / (k.p + 1.0);
          },
          [](kinds::Table& k) {
            validate(k);
            return table_l1(k);
          },
      },
      params_);
  if (!std::isfinite(l1_norm_)) throw Error(ErrorCode::InvalidArgument, "potential has infinite L1 norm");
}

Potential Potential::table(std::vector<double> x, std::vector<double> q) {
  kinds::Table t;
  t.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  t.q = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  return Potential(std::move(t));
}

PotentialKind Potential::kind() const { return static_cast<PotentialKind>(params_.index()); }

std::string Potential::name() const {
  switch (kind()) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "constant";
    case PotentialKind::cosine: return "cosine";
    case PotentialKind::step: return "step";
    case PotentialKind::power: return "power";
    case PotentialKind::table: return "table";
  }
  return "unknown";
}

double Potential::integral(double a, double b) const {
  return std::visit(
      overloaded{
          [](const kinds::Zero&) { return 0.0; },
          [&](const kinds::Constant& k) { return k.c * (b - a); },
          [&](const kinds::Cosine& k) {
            if (k.f == 0.0) return k.a * (b - a);
            // sin(fb) - sin(fa) = 2 cos(f(a+b)/2) sin(f(b-a)/2)
            return k.a * 2.0 * std::cos(0.5 * k.f * (a + b)) * std::sin(0.5 * k.f * (b - a)) / k.f;
          },
          [&](const kinds::Step& k) {
            const double u = std::max(a, k.l), v = std::min(b, k.r);
            return v > u ? k.v * (v - u) : 0.0;
          },
          [&](const kinds::Power& k) {
            const double e = k.p + 1.0;
            return k.a * power_difference(a, b, e) / e;
          },
          [&](const kinds::Table& k) { return table_integral(k, a, b); },
      },
      params_);
}

double Potential::value(double x) const {
  return std::visit(
      overloaded{
          [](const kinds::Zero&) { return 0.0; },
          [](const kinds::Constant& k) { return k.c; },
          [&](const kinds::Cosine& k) { return k.a * std::cos(k.f * x); },
          [&](const kinds::Step& k) { return (x >= k.l && x <= k.r) ? k.v : 0.0; },
          [&](const kinds::Power& k) {
            if (x == 0.0 && k.p < 0.0) {
              return k.a == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), k.a);
            }
            return k.a * std::pow(x, k.p);
          },
          [&](const kinds::Table& k) {
            if (x <= 0.0) return k.q[0];
            if (x >= kPi) return k.q[k.q.size() - 1];
            const auto* begin = k.x.data();
            const auto* it = std::upper_bound(begin, begin + k.x.size(), x);
            const Eigen::Index i = (it - begin) - 1;
            const double w = (x - k.x[i]) / (k.x[i + 1] - k.x[i]);
            return (1.0 - w) * k.q[i] + w * k.q[i + 1];
          },
      },
      params_);
}

bool Potential::singular_at_origin() const {
  const auto* p = std::get_if<kinds::Power>(&params_);
  return p != nullptr && p->p < 0.0 && p->a != 0.0;
}

double eval_cell_average(const Potential& q, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::EmptyInterval, "cell average needs a < b");
  if (a < 0.0 || b > kPi) throw Error(ErrorCode::DomainMismatch, "cell must lie in [0, pi]");
  return q.integral(a, b) / (b - a);
}

namespace {

double get_number(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::InvalidArgument, std::string("missing parameter '") + key + "'");
  if (!it->is_number()) throw Error(ErrorCode::InvalidArgument, std::string("parameter '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

Potential parse_potential(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("potential is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "potential must be a JSON object");
  auto kind_it = doc.find("kind");
  if (kind_it == doc.end() || !kind_it->is_string()) {
    throw Error(ErrorCode::UnknownKind, "potential needs a string 'kind'");
  }
  const std::string kind = kind_it->get<std::string>();
  if (kind == "zero") return Potential::zero();
  if (kind == "constant") return Potential::constant(get_number(doc, "c"));
  if (kind == "cosine") return Potential::cosine(get_number(doc, "a"), get_number(doc, "f"));
  if (kind == "step") return Potential::step(get_number(doc, "v"), get_number(doc, "l"), get_number(doc, "r"));
  if (kind == "power") return Potential::power(get_number(doc, "a"), get_number(doc, "p"));
  if (kind == "table") {
    auto pts = doc.find("points");
    if (pts == doc.end() || !pts->is_array()) throw Error(ErrorCode::InvalidArgument, "table needs 'points'");
    std::vector<double> x, q;
    for (const auto& p : *pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw Error(ErrorCode::InvalidArgument, "table points must be [x, q] number pairs");
      }
      x.push_back(p[0].get<double>());
      q.push_back(p[1].get<double>());
    }
    return Potential::table(std::move(x), std::move(q));
  }
  throw Error(ErrorCode::UnknownKind, "unsupported potential kind '" + kind + "'");
}

std::string to_json(const Potential& q) {
  nlohmann::json doc = std::visit(
      overloaded{
          [](const kinds::Zero&) { return nlohmann::json{{"kind", "zero"}}; },
          [](const kinds::Constant& k) { return nlohmann::json{{"kind", "constant"}, {"c", k.c}}; },
          [](const kinds::Cosine& k) { return nlohmann::json{{"kind", "cosine"}, {"a", k.a}, {"f", k.f}}; },
          [](const kinds::Step& k) {
            return nlohmann::json{{"kind", "step"}, {"v", k.v}, {"l", k.l}, {"r", k.r}};
          },
          [](const kinds::Power& k) { return nlohmann::json{{"kind", "power"}, {"a", k.a}, {"p", k.p}}; },
          [](const kinds::Table& k) {
            nlohmann::json pts = nlohmann::json::array();
            for (Eigen::Index i = 0; i < k.x.size(); ++i) pts.push_back({k.x[i], k.q[i]});
            return nlohmann::json{{"kind", "table"}, {"points", pts}};
          },
      },
      q.params());
  return doc.dump();
}

}  // namespace sturm
