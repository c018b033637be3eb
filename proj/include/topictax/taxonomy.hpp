#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topictax {

// Rooted labeled tree of topics. Node 0 is always the root (the query);
// all node topics are distinct and depth(child) = depth(parent) + 1.
class Taxonomy {
  public:
    struct Node {
        std::string topic;
        std::int32_t parent = -1;           // -1 for the root
        std::vector<std::int32_t> children;
        int depth = 0;
    };

    explicit Taxonomy(const std::string& root_topic);

    std::int32_t add_node(const std::string& topic, std::int32_t parent);

    const Node& node(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::string& root_topic() const { return nodes_.front().topic; }
    std::size_t size() const { return nodes_.size(); }

    // -1 if absent
    std::int32_t find(const std::string& topic) const;

    // Number of nodes in the subtree rooted at id (including id).
    std::size_t subtree_size(std::int32_t id) const;

    // Nested {"topic": ..., "children": [...]} with children ordered by
    // subtree size descending, then topic string. Round-trips losslessly.
    std::string to_json() const;
    static Taxonomy from_json(const std::string& text);

    // Directed tree in DOT syntax, edges parent -> child.
    std::string to_dot() const;

    bool operator==(const Taxonomy& other) const;

  private:
    std::vector<Node> nodes_;
};

}  // namespace topictax
