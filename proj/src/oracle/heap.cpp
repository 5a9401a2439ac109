#include "lsysgen/error.hpp"
#include "lsysgen/oracle.hpp"

#include <algorithm>

namespace lsysgen {

ObjectId Heap::allocate() {
    objects_.push_back(HeapObject{1, {}});
    ++live_;
    ++refSum_;
    maxLive_ = std::max(maxLive_, live_);
    return objects_.size();
}

Heap::HeapObject& Heap::live_object(ObjectId id) {
    return const_cast<HeapObject&>(std::as_const(*this).live_object(id));
}

const Heap::HeapObject& Heap::live_object(ObjectId id) const {
    if (id == 0 || id > objects_.size()) {
        throw OracleError("reference to unknown object " + std::to_string(id));
    }
    const auto& obj = objects_[id - 1];
    if (obj.refC <= 0) {
        throw OracleError("use of freed object " + std::to_string(id));
    }
    return obj;
}

void Heap::retain(ObjectId id) {
    ++live_object(id).refC;
    ++refSum_;
}

void Heap::release(ObjectId id) {
    auto& obj = live_object(id);
    --obj.refC;
    --refSum_;
    if (obj.refC == 0) {
        obj.items.clear();
        obj.items.shrink_to_fit();
        --live_;
    }
}

std::int64_t Heap::insert(ObjectId id, std::int64_t value) {
    auto& items = live_object(id).items;
    if (kind_ == ContainerKind::SortedList) {
        items.insert(std::upper_bound(items.begin(), items.end(), value), value);
    } else {
        items.push_back(value);
    }
    return static_cast<std::int64_t>(items.size());
}

bool Heap::remove(ObjectId id, std::int64_t value) {
    auto& items = live_object(id).items;
    auto it = kind_ == ContainerKind::SortedList ? std::lower_bound(items.begin(), items.end(), value)
                                                 : std::find(items.begin(), items.end(), value);
    if (it == items.end() || *it != value) {
        return false;
    }
    items.erase(it);
    return true;
}

bool Heap::contains(ObjectId id, std::int64_t value) const {
    const auto& items = live_object(id).items;
    if (kind_ == ContainerKind::SortedList) {
        return std::binary_search(items.begin(), items.end(), value);
    }
    return std::find(items.begin(), items.end(), value) != items.end();
}

std::int64_t Heap::ref_count(ObjectId id) const {
    if (id == 0 || id > objects_.size()) {
        throw OracleError("reference to unknown object " + std::to_string(id));
    }
    return objects_[id - 1].refC;
}

bool Heap::is_live(ObjectId id) const { return id != 0 && id <= objects_.size() && objects_[id - 1].refC > 0; }

std::int64_t Heap::recount() const noexcept {
    std::int64_t sum = 0;
    for (const auto& obj : objects_) {
        sum += obj.refC;
    }
    return sum;
}

RunStats Heap::stats() const {
    RunStats s;
    s.maxLive = maxLive_;
    s.liveAtExit = static_cast<std::int64_t>(live_);
    return s;
}

} // namespace lsysgen
