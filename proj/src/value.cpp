#include "absprog/value.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "absprog/error.hpp"

namespace absprog {

std::string value_to_string(const Value& v) {
  switch (v.index()) {
    case 0:
      return std::get<bool>(v) ? "true" : "false";
    case 1:
      return std::to_string(std::get<std::int64_t>(v));
    default:
      return std::get<std::string>(v);
  }
}

Domain Domain::boolean() {
  Domain d;
  d.kind_ = Kind::Boolean;
  return d;
}

Domain Domain::integer(std::int64_t low, std::int64_t high) {
  if (low > high)
    fail(Errc::invalid_argument, "integer domain requires min <= max, got [" +
                                     std::to_string(low) + ".." +
                                     std::to_string(high) + "]");
  // Keep the carrier size representable; enumeration budgets cap real use
  // far below this anyway.
  if (static_cast<__int128>(high) - static_cast<__int128>(low) >=
      (static_cast<__int128>(1) << 62))
    fail(Errc::invalid_argument, "integer domain carrier too large");
  Domain d;
  d.kind_ = Kind::Integer;
  d.low_ = low;
  d.high_ = high;
  return d;
}

Domain Domain::enumeration(std::vector<std::string> labels) {
  if (labels.empty())
    fail(Errc::invalid_argument, "enumeration domain requires at least one label");
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!is_valid_variable_name(label))
      fail(Errc::invalid_argument, "invalid enumeration label '" + label + "'");
    if (!seen.insert(label).second)
      fail(Errc::invalid_argument, "duplicate enumeration label '" + label + "'");
  }
  Domain d;
  d.kind_ = Kind::Enumeration;
  d.labels_ = std::move(labels);
  return d;
}

std::uint64_t Domain::size() const {
  switch (kind_) {
    case Kind::Boolean:
      return 2;
    case Kind::Integer:
      return static_cast<std::uint64_t>(high_ - low_) + 1;
    case Kind::Enumeration:
      return labels_.size();
  }
  return 0;
}

bool Domain::contains(const Value& v) const {
  switch (kind_) {
    case Kind::Boolean:
      return std::holds_alternative<bool>(v);
    case Kind::Integer:
      return std::holds_alternative<std::int64_t>(v) &&
             std::get<std::int64_t>(v) >= low_ &&
             std::get<std::int64_t>(v) <= high_;
    case Kind::Enumeration:
      return std::holds_alternative<std::string>(v) &&
             std::find(labels_.begin(), labels_.end(),
                       std::get<std::string>(v)) != labels_.end();
  }
  return false;
}

Value Domain::value_at(std::uint64_t index) const {
  if (index >= size())
    fail(Errc::invalid_argument, "domain index out of range");
  switch (kind_) {
    case Kind::Boolean:
      return Value(index != 0);
    case Kind::Integer:
      return Value(low_ + static_cast<std::int64_t>(index));
    case Kind::Enumeration:
      return Value(labels_[index]);
  }
  fail(Errc::invalid_argument, "unreachable");
}

std::optional<std::uint64_t> Domain::index_of(const Value& v) const {
  if (!contains(v)) return std::nullopt;
  switch (kind_) {
    case Kind::Boolean:
      return std::get<bool>(v) ? 1u : 0u;
    case Kind::Integer:
      return static_cast<std::uint64_t>(std::get<std::int64_t>(v) - low_);
    case Kind::Enumeration: {
      const auto& label = std::get<std::string>(v);
      auto it = std::find(labels_.begin(), labels_.end(), label);
      return static_cast<std::uint64_t>(it - labels_.begin());
    }
  }
  return std::nullopt;
}

std::string Domain::to_text() const {
  switch (kind_) {
    case Kind::Boolean:
      return "bool";
    case Kind::Integer:
      return "int[" + std::to_string(low_) + ".." + std::to_string(high_) + "]";
    case Kind::Enumeration: {
      std::string out = "enum{";
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i > 0) out += ",";
        out += labels_[i];
      }
      out += "}";
      return out;
    }
  }
  return "?";
}

bool Domain::operator==(const Domain& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Boolean:
      return true;
    case Kind::Integer:
      return low_ == other.low_ && high_ == other.high_;
    case Kind::Enumeration:
      return labels_ == other.labels_;
  }
  return false;
}

bool Domain::operator<(const Domain& other) const {
  if (kind_ != other.kind_) return kind_ < other.kind_;
  switch (kind_) {
    case Kind::Boolean:
      return false;
    case Kind::Integer:
      if (low_ != other.low_) return low_ < other.low_;
      return high_ < other.high_;
    case Kind::Enumeration:
      return labels_ < other.labels_;
  }
  return false;
}

bool is_valid_variable_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::unknown_state: return "UnknownState";
    case Errc::not_a_superstate: return "NotASuperstate";
    case Errc::not_a_subspace: return "NotASubspace";
    case Errc::name_collision: return "NameCollision";
    case Errc::incomplete_auxiliary_map: return "IncompleteAuxiliaryMap";
    case Errc::variable_already_in_base: return "VariableAlreadyInBase";
    case Errc::auxiliary_domain_mismatch: return "AuxiliaryDomainMismatch";
    case Errc::inapplicable_step: return "InapplicableStep";
    case Errc::recursive_call_graph: return "RecursiveCallGraph";
    case Errc::multi_output_callee: return "MultiOutputCallee";
    case Errc::space_mismatch: return "SpaceMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_state: return "InvalidState";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace absprog
