#include "compmdp/scheduler_tag.hpp"

namespace compmdp {

namespace {

Tag node(TagNode n) { return std::make_shared<const TagNode>(std::move(n)); }

}  // namespace

Tag make_leaf_tag(std::string component, Scheduler s) {
    TagNode n;
    n.kind = TagNode::Kind::Leaf;
    n.component = std::move(component);
    n.scheduler = std::move(s);
    return node(std::move(n));
}

Tag make_frozen_tag(std::string component, Scheduler s) {
    TagNode n;
    n.kind = TagNode::Kind::Frozen;
    n.component = std::move(component);
    n.scheduler = std::move(s);
    return node(std::move(n));
}

Tag make_seq_tag(Tag a, Tag b) {
    TagNode n;
    n.kind = TagNode::Kind::Seq;
    n.left = std::move(a);
    n.right = std::move(b);
    return node(std::move(n));
}

Tag make_sum_tag(Tag a, Tag b) {
    TagNode n;
    n.kind = TagNode::Kind::Sum;
    n.left = std::move(a);
    n.right = std::move(b);
    return node(std::move(n));
}

Tag make_trace_tag(Tag a) {
    TagNode n;
    n.kind = TagNode::Kind::Trace;
    n.left = std::move(a);
    return node(std::move(n));
}

Tag make_slot_tag(std::size_t side, std::size_t index) {
    TagNode n;
    n.kind = TagNode::Kind::Slot;
    n.slot_side = side;
    n.slot_index = index;
    return node(std::move(n));
}

int compare_tags(const Tag& a, const Tag& b) {
    if (a == b) return 0;
    if (!a) return -1;
    if (!b) return 1;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (int c = a->component.compare(b->component); c != 0) return c < 0 ? -1 : 1;
    if (a->scheduler != b->scheduler) return a->scheduler < b->scheduler ? -1 : 1;
    if (a->slot_side != b->slot_side) return a->slot_side < b->slot_side ? -1 : 1;
    if (a->slot_index != b->slot_index) return a->slot_index < b->slot_index ? -1 : 1;
    if (int c = compare_tags(a->left, b->left); c != 0) return c;
    return compare_tags(a->right, b->right);
}

std::string to_string(const Tag& t) {
    if (!t) return "wire";
    auto sched = [](const Scheduler& s) {
        std::string out;
        for (std::size_t k = 0; k < s.choice.size(); ++k)
            out += (k ? "," : "") + std::to_string(s.choice[k]);
        return out;
    };
    switch (t->kind) {
    case TagNode::Kind::Leaf: return t->component + "[" + sched(t->scheduler) + "]";
    case TagNode::Kind::Frozen: return "frozen " + t->component + "[" + sched(t->scheduler) + "]";
    case TagNode::Kind::Seq: return "(" + to_string(t->left) + " ; " + to_string(t->right) + ")";
    case TagNode::Kind::Sum: return "(" + to_string(t->left) + " (+) " + to_string(t->right) + ")";
    case TagNode::Kind::Trace: return "tr(" + to_string(t->left) + ")";
    case TagNode::Kind::Slot:
        return "slot" + std::to_string(t->slot_side) + ":" + std::to_string(t->slot_index);
    }
    return "?";
}

}  // namespace compmdp
