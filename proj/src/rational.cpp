#include "drbm/rational.hpp"

#include <charconv>

#include "drbm/error.hpp"

namespace drbm {

namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  return text;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  const auto num = parse_int(trim(text.substr(0, slash)));
  if (!num) return std::nullopt;
  if (slash == std::string_view::npos) return Rational{*num};
  const auto den = parse_int(trim(text.substr(slash + 1)));
  if (!den || *den == 0) return std::nullopt;
  return Rational{*num, *den};
}

std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Hypothesis: return "HypothesisViolation";
    case ErrorCode::InternalInvariant: return "InternalInvariantViolation";
    case ErrorCode::PoleOfG: return "PoleOfG";
    case ErrorCode::PoleOfW1: return "PoleOfW1";
    case ErrorCode::PoleOfGamma: return "PoleOfGamma";
    case ErrorCode::PoleOfD: return "PoleOfD";
    case ErrorCode::PoleOfPhi: return "PoleOfPhi1";
    case ErrorCode::OnKernelZeroSet: return "OnKernelZeroSet";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::UnsupportedCase: return "UnsupportedCase";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoSolution: return "NoSolution";
  }
  return "Error";
}

}  // namespace drbm
