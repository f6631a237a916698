#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "clusterlab/errors.hpp"

namespace clusterlab {

/// A truncated area sequence a_1..a_n together with the remainder
/// sum_{k > n} sqrt(a_k) of the full sequence.
struct AreaSpec {
  std::string text;
  std::string family;  // list, geom, pow4, pow
  std::vector<double> areas;
  double sqrt_tail = 0.0;

  double sqrt_sum() const {
    double s = sqrt_tail;
    for (double a : areas) s += std::sqrt(a);
    return s;
  }
};

namespace detail {

inline std::vector<double> parse_reals(const std::string& body, const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size() || !std::isfinite(v))
      throw Error(ErrorCode::invalid_argument, "bad number '" + tok + "' in area spec '" + text + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline void need_arity(const std::vector<double>& p, std::size_t n, const std::string& text) {
  if (p.size() != n)
    throw Error(ErrorCode::invalid_argument, "area spec '" + text + "' expects " + std::to_string(n) + " parameters");
}

inline void divergent(const std::string& text) {
  throw Error(ErrorCode::hypothesis_violated, "area spec '" + text + "' violates sum_k sqrt(a_k) < inf");
}

}  // namespace detail

/// Grammar: <family>[@n]
///   list:a1,a2,...   literal areas; @n keeps the first n, the rest go to the tail
///   geom:r,q         a_k = r q^(k-1), 0 < q < 1
///   pow4:m1,m2,...   a_k = 4^(-m_k), literal
///   pow:p            a_k = k^(-p), p > 2
///   invsq            a_k = k^(-2), always rejected
/// Infinite families need @n or `default_n`.
inline AreaSpec parse_area_spec(const std::string& text, std::optional<int> default_n = std::nullopt) {
  AreaSpec out;
  out.text = text;
  std::string head = text;
  std::optional<int> n = default_n;
  if (const auto at = text.rfind('@'); at != std::string::npos) {
    head = text.substr(0, at);
    const std::string tail = text.substr(at + 1);
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tail.empty() || used != tail.size() || v < 1 || v > 1000000)
      throw Error(ErrorCode::invalid_argument, "bad truncation index in area spec '" + text + "'");
    n = static_cast<int>(v);
  }
  const auto colon = head.find(':');
  out.family = head.substr(0, colon);
  const std::string body = colon == std::string::npos ? std::string{} : head.substr(colon + 1);

  if (out.family == "invsq") {
    if (colon != std::string::npos) throw Error(ErrorCode::invalid_argument, "invsq takes no parameters");
    detail::divergent(text);
  }
  if (colon == std::string::npos) throw Error(ErrorCode::invalid_argument, "unknown area spec '" + text + "'");
  const auto p = detail::parse_reals(body, text);

  if (out.family == "list" || out.family == "pow4") {
    std::vector<double> all;
    for (double v : p) {
      if (out.family == "pow4") {
        if (v < 0.0 || v != std::floor(v) || v > 500)
          throw Error(ErrorCode::invalid_argument, "pow4 exponents must be integers in [0, 500]");
        all.push_back(std::ldexp(1.0, -2 * static_cast<int>(v)));
      } else {
        if (v < 0.0) throw Error(ErrorCode::invalid_argument, "negative area in '" + text + "'");
        all.push_back(v);
      }
    }
    const std::size_t keep = n ? std::min<std::size_t>(static_cast<std::size_t>(*n), all.size()) : all.size();
    out.areas.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
    for (std::size_t k = keep; k < all.size(); ++k) out.sqrt_tail += std::sqrt(all[k]);
    return out;
  }

  auto count = [&]() {
    if (!n) throw Error(ErrorCode::invalid_argument, "area spec '" + text + "' needs a truncation index @n");
    return *n;
  };
  if (out.family == "geom") {
    detail::need_arity(p, 2, text);
    const double r = p[0], q = p[1];
    if (!(r > 0.0) || !(q > 0.0)) throw Error(ErrorCode::invalid_argument, "geom needs r > 0 and q > 0");
    if (q >= 1.0) detail::divergent(text);
    const int m = count();
    double a = r;
    for (int k = 0; k < m; ++k, a *= q) out.areas.push_back(a);
    const double sq = std::sqrt(q);
    out.sqrt_tail = std::sqrt(r) * std::pow(sq, m) / (1.0 - sq);
    return out;
  }
  if (out.family == "pow") {
    detail::need_arity(p, 1, text);
    const double e = p[0];
    if (e <= 2.0) detail::divergent(text);
    const int m = count();
    double partial = 0.0;
    for (int k = 1; k <= m; ++k) {
      out.areas.push_back(std::pow(static_cast<double>(k), -e));
      partial += std::pow(static_cast<double>(k), -0.5 * e);
    }
    out.sqrt_tail = std::max(0.0, boost::math::zeta(0.5 * e) - partial);
    return out;
  }
  throw Error(ErrorCode::invalid_argument, "unknown area family '" + out.family + "'");
}

}  // namespace clusterlab
