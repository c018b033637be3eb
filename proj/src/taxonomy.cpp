#include "topictax/taxonomy.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace topictax {

namespace {

using nlohmann::ordered_json;

ordered_json node_to_json(const Taxonomy& tax, std::int32_t id) {
    const auto& node = tax.node(id);
    ordered_json obj;
    obj["topic"] = node.topic;
    std::vector<std::int32_t> children = node.children;
    std::sort(children.begin(), children.end(), [&](std::int32_t a, std::int32_t b) {
        const std::size_t sa = tax.subtree_size(a);
        const std::size_t sb = tax.subtree_size(b);
        if (sa != sb) return sa > sb;
        return tax.node(a).topic < tax.node(b).topic;
    });
    obj["children"] = ordered_json::array();
    for (std::int32_t c : children) {
        obj["children"].push_back(node_to_json(tax, c));
    }
    return obj;
}

void node_from_json(const ordered_json& obj, Taxonomy& tax, std::int32_t parent,
                    std::unordered_set<std::string>& seen) {
    if (!obj.is_object() || !obj.contains("topic") || !obj["topic"].is_string()) {
        throw std::runtime_error("taxonomy node must be an object with a "
                                 "string \"topic\" field");
    }
    const std::string topic = obj["topic"].get<std::string>();
    if (!seen.insert(topic).second) {
        throw std::runtime_error("duplicate topic in taxonomy: " + topic);
    }
    const std::int32_t id = parent < 0 ? 0 : tax.add_node(topic, parent);
    if (obj.contains("children")) {
        if (!obj["children"].is_array()) {
            throw std::runtime_error("taxonomy \"children\" must be an array");
        }
        for (const auto& child : obj["children"]) {
            node_from_json(child, tax, id, seen);
        }
    }
}

std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

Taxonomy::Taxonomy(const std::string& root_topic) {
    if (root_topic.empty()) {
        throw std::invalid_argument("taxonomy root topic must be nonempty");
    }
    Node root;
    root.topic = root_topic;
    nodes_.push_back(std::move(root));
}

std::int32_t Taxonomy::add_node(const std::string& topic, std::int32_t parent) {
    if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
        throw std::out_of_range("taxonomy parent id out of range");
    }
    Node node;
    node.topic = topic;
    node.parent = parent;
    node.depth = nodes_[static_cast<std::size_t>(parent)].depth + 1;
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(std::move(node));
    nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
}

std::int32_t Taxonomy::find(const std::string& topic) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].topic == topic) return static_cast<std::int32_t>(i);
    }
    return -1;
}

std::size_t Taxonomy::subtree_size(std::int32_t id) const {
    std::size_t total = 1;
    for (std::int32_t c : node(id).children) {
        total += subtree_size(c);
    }
    return total;
}

std::string Taxonomy::to_json() const {
    return node_to_json(*this, 0).dump(2) + "\n";
}

Taxonomy Taxonomy::from_json(const std::string& text) {
    ordered_json obj = ordered_json::parse(text, nullptr, false);
    if (obj.is_discarded()) {
        throw std::runtime_error("malformed taxonomy JSON");
    }
    if (!obj.is_object() || !obj.contains("topic") || !obj["topic"].is_string()) {
        throw std::runtime_error("taxonomy root must be an object with a "
                                 "string \"topic\" field");
    }
    Taxonomy tax(obj["topic"].get<std::string>());
    std::unordered_set<std::string> seen;
    node_from_json(obj, tax, -1, seen);
    return tax;
}

std::string Taxonomy::to_dot() const {
    std::string out = "digraph taxonomy {\n";
    for (const Node& node : nodes_) {
        out += "  \"" + dot_escape(node.topic) + "\";\n";
    }
    for (const Node& node : nodes_) {
        if (node.parent < 0) continue;
        out += "  \"" +
               dot_escape(nodes_[static_cast<std::size_t>(node.parent)].topic) +
               "\" -> \"" + dot_escape(node.topic) + "\";\n";
    }
    out += "}\n";
    return out;
}

bool Taxonomy::operator==(const Taxonomy& other) const {
    return to_json() == other.to_json();
}

}  // namespace topictax
