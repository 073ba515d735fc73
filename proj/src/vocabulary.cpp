#include "transkb/vocabulary.hpp"

namespace transkb {

EntityId Vocabulary::add_entity(const std::string& name) {
  auto it = entity_ids_.find(name);
  if (it != entity_ids_.end()) return it->second;
  EntityId id = static_cast<EntityId>(entity_names_.size());
  entity_ids_.emplace(name, id);
  entity_names_.push_back(name);
  return id;
}

RelationId Vocabulary::add_relation(const std::string& name) {
  auto it = relation_ids_.find(name);
  if (it != relation_ids_.end()) return it->second;
  RelationId id = static_cast<RelationId>(relation_names_.size());
  relation_ids_.emplace(name, id);
  relation_names_.push_back(name);
  return id;
}

std::optional<EntityId> Vocabulary::entity_id(const std::string& name) const {
  auto it = entity_ids_.find(name);
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::relation_id(const std::string& name) const {
  auto it = relation_ids_.find(name);
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::entity_name(EntityId id) const {
  if (id < 0 || id >= entity_count()) {
    throw IndexError("entity id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(entity_count()) + ")");
  }
  return entity_names_[static_cast<std::size_t>(id)];
}

const std::string& Vocabulary::relation_name(RelationId id) const {
  if (id < 0 || id >= relation_count()) {
    throw IndexError("relation id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(relation_count()) + ")");
  }
  return relation_names_[static_cast<std::size_t>(id)];
}

}  // namespace transkb
