#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "transkb/types.hpp"

namespace transkb {

// Bijective name <-> dense id maps for entities and relations. Ids are
// contiguous from 0 in encounter order.
class Vocabulary {
 public:
  EntityId add_entity(const std::string& name);
  RelationId add_relation(const std::string& name);

  std::optional<EntityId> entity_id(const std::string& name) const;
  std::optional<RelationId> relation_id(const std::string& name) const;

  const std::string& entity_name(EntityId id) const;
  const std::string& relation_name(RelationId id) const;

  std::int64_t entity_count() const { return static_cast<std::int64_t>(entity_names_.size()); }
  std::int64_t relation_count() const {
    return static_cast<std::int64_t>(relation_names_.size());
  }

  const std::vector<std::string>& entity_names() const { return entity_names_; }
  const std::vector<std::string>& relation_names() const { return relation_names_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entity_names_ == b.entity_names_ && a.relation_names_ == b.relation_names_;
  }

 private:
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::unordered_map<std::string, RelationId> relation_ids_;
  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
};

}  // namespace transkb
