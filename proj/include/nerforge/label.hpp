#ifndef NERFORGE_LABEL_HPP
#define NERFORGE_LABEL_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nerforge {

// Entity types, declared in alphabetical order so that label order matches
// the lexicographic order of the serialized tags.
enum class EntityType : std::uint8_t { LOC, MISC, ORG, PER };

enum class LabelKind : std::uint8_t { Begin, Inside, Outside };

inline constexpr std::array<EntityType, 4> kEntityTypes = {
    EntityType::LOC, EntityType::MISC, EntityType::ORG, EntityType::PER};

constexpr std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::LOC: return "LOC";
    case EntityType::MISC: return "MISC";
    case EntityType::ORG: return "ORG";
    case EntityType::PER: return "PER";
  }
  return "";
}

constexpr std::optional<EntityType> parse_entity_type(std::string_view s) {
  for (EntityType t : kEntityTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

// One IOB tag. Exactly nine values exist; Outside carries no entity type.
class Label {
 public:
  constexpr Label() = default;

  static constexpr Label outside() { return Label(); }
  static constexpr Label begin(EntityType type) {
    return Label(LabelKind::Begin, type);
  }
  static constexpr Label inside(EntityType type) {
    return Label(LabelKind::Inside, type);
  }

  // Dense index in [0, 9): B-LOC, B-MISC, B-ORG, B-PER, I-LOC, ..., I-PER, O.
  static constexpr std::size_t kCount = 9;

  static constexpr Label from_index(std::size_t index) {
    if (index >= 8) return outside();
    const auto type = kEntityTypes[index % 4];
    return index < 4 ? begin(type) : inside(type);
  }

  constexpr std::size_t index() const {
    switch (kind_) {
      case LabelKind::Begin: return static_cast<std::size_t>(type_);
      case LabelKind::Inside: return 4 + static_cast<std::size_t>(type_);
      case LabelKind::Outside: return 8;
    }
    return 8;
  }

  constexpr LabelKind kind() const { return kind_; }
  // Meaningless for Outside.
  constexpr EntityType type() const { return type_; }

  constexpr bool is_outside() const { return kind_ == LabelKind::Outside; }
  constexpr bool is_begin() const { return kind_ == LabelKind::Begin; }
  constexpr bool is_inside() const { return kind_ == LabelKind::Inside; }

  // "O", "B-<TYPE>" or "I-<TYPE>".
  std::string str() const {
    if (is_outside()) return "O";
    std::string out(is_begin() ? "B-" : "I-");
    out += to_string(type_);
    return out;
  }

  // Accepts exactly the nine serialized forms.
  static constexpr std::optional<Label> parse(std::string_view s) {
    if (s == "O") return outside();
    if (s.size() < 3 || s[1] != '-') return std::nullopt;
    const auto type = parse_entity_type(s.substr(2));
    if (!type) return std::nullopt;
    if (s[0] == 'B') return begin(*type);
    if (s[0] == 'I') return inside(*type);
    return std::nullopt;
  }

  friend constexpr bool operator==(Label a, Label b) {
    return a.index() == b.index();
  }
  friend constexpr std::strong_ordering operator<=>(Label a, Label b) {
    return a.index() <=> b.index();
  }

 private:
  constexpr Label(LabelKind kind, EntityType type) : kind_(kind), type_(type) {}

  LabelKind kind_ = LabelKind::Outside;
  EntityType type_ = EntityType::LOC;
};

inline constexpr std::array<Label, Label::kCount> all_labels() {
  std::array<Label, Label::kCount> out{};
  for (std::size_t i = 0; i < Label::kCount; ++i) out[i] = Label::from_index(i);
  return out;
}

}  // namespace nerforge

#endif  // NERFORGE_LABEL_HPP
