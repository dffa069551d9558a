#ifndef ABSPROG_VALUE_HPP
#define ABSPROG_VALUE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace absprog {

// A runtime value: a boolean, a bounded integer, or an enumeration label.
// The variant order fixes the canonical cross-kind ordering used by state
// comparison (bool < int < enum), which keeps every container deterministic.
using Value = std::variant<bool, std::int64_t, std::string>;

std::string value_to_string(const Value& v);

// A finite, nonempty value carrier. Equality is structural: bool and
// int[0..1] are distinct domains even though their carriers are isomorphic.
class Domain {
 public:
  enum class Kind { Boolean, Integer, Enumeration };

  static Domain boolean();
  static Domain integer(std::int64_t low, std::int64_t high);
  static Domain enumeration(std::vector<std::string> labels);

  Kind kind() const { return kind_; }
  std::int64_t low() const { return low_; }
  std::int64_t high() const { return high_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::uint64_t size() const;
  bool contains(const Value& v) const;

  // Values in domain order: false < true, ascending integers, labels in
  // declaration order.
  Value value_at(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const Value& v) const;
  Value first_value() const { return value_at(0); }

  // DSL type syntax: "bool", "int[0..3]", "enum{red,green}".
  std::string to_text() const;

  bool operator==(const Domain& other) const;
  bool operator!=(const Domain& other) const { return !(*this == other); }
  bool operator<(const Domain& other) const;

 private:
  Domain() = default;

  Kind kind_ = Kind::Boolean;
  std::int64_t low_ = 0;
  std::int64_t high_ = 0;
  std::vector<std::string> labels_;
};

// Variable names are identifiers: a letter followed by letters, digits or
// underscores. Enforced wherever names enter from the outside world.
bool is_valid_variable_name(const std::string& name);

}  // namespace absprog

#endif
