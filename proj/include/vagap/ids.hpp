#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace vagap {

// String identifier tagged by the kind of entity it names, so a fact id can
// never be passed where an option id is expected.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  const std::string& str() const noexcept { return value; }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

struct ValueTag {};
struct NormTag {};
struct FactTag {};
struct OptionTag {};
struct ArgumentTag {};
struct AgentTag {};
struct RuleTag {};

using ValueId = Id<ValueTag>;
using NormId = Id<NormTag>;
using FactId = Id<FactTag>;
using OptionId = Id<OptionTag>;
using ArgumentId = Id<ArgumentTag>;
using AgentId = Id<AgentTag>;
using RuleId = Id<RuleTag>;

}  // namespace vagap

template <class Tag>
struct std::hash<vagap::Id<Tag>> {
  std::size_t operator()(const vagap::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
