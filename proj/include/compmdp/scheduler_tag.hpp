#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "compmdp/model.hpp"

namespace compmdp {

struct TagNode;
// A null tag marks a wire, which has no positions to schedule.
using Tag = std::shared_ptr<const TagNode>;

// Records which component schedulers produced a semantic element.
struct TagNode {
    enum class Kind : std::uint8_t { Leaf, Frozen, Seq, Sum, Trace, Slot };

    Kind kind = Kind::Leaf;
    std::string component;
    Scheduler scheduler;
    Tag left;
    Tag right;
    // Slot tags are placeholders used while composing bidirectional arrows.
    std::size_t slot_side = 0;
    std::size_t slot_index = 0;
};

Tag make_leaf_tag(std::string component, Scheduler s);
Tag make_frozen_tag(std::string component, Scheduler s);
Tag make_seq_tag(Tag a, Tag b);
Tag make_sum_tag(Tag a, Tag b);
Tag make_trace_tag(Tag a);
Tag make_slot_tag(std::size_t side, std::size_t index);

// Total order: null first, then by kind, component, scheduler and children.
int compare_tags(const Tag& a, const Tag& b);
std::string to_string(const Tag& t);

}  // namespace compmdp
