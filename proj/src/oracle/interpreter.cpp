#include "lsysgen/error.hpp"
#include "lsysgen/oracle.hpp"

namespace lsysgen {
namespace {

/// The Data parameter: references (or scalar values) passed by the caller,
/// each consumed at most once by a `new` in the callee.
struct DataArgs {
    std::vector<ObjectId> objects;
    std::vector<std::int64_t> scalars;
    std::size_t consumed = 0;

    std::size_t size() const noexcept { return objects.size() + scalars.size(); }
};

struct Frame {
    const FunctionDef* function = nullptr;
    DataArgs* data = nullptr;
    std::vector<ObjectId> objects;     // per slot, 0 when out of scope
    std::vector<std::int64_t> scalars; // per slot
};

class Interpreter {
public:
    Interpreter(const Program& program, const ExecConfig& config)
        : program_(program), config_(config), scalar_(program.plan.container == ContainerKind::Scalar),
          heap_(program.plan.container) {}

    RunResult run() {
        DataArgs none;
        call(program_.entry, none);
        result_.stats.maxLive = heap_.max_live();
        result_.stats.liveAtExit = static_cast<std::int64_t>(heap_.live());
        result_.stats.checksum = checksum_.value();
        return std::move(result_);
    }

private:
    void call(FunctionId id, DataArgs& data) {
        const auto& f = program_.function(id);
        Frame frame;
        frame.function = &f;
        frame.data = &data;
        const auto n = static_cast<std::size_t>(f.numSlots);
        if (scalar_) {
            frame.scalars.assign(n, 0);
        } else {
            frame.objects.assign(n, 0);
        }
        stack_.push_back(&frame);
        exec_list(frame, f.body);
        if (!scalar_) {
            for (std::size_t i = data.consumed; i < data.objects.size(); ++i) {
                heap_.release(data.objects[i]);
            }
            data.consumed = data.objects.size();
        }
        stack_.pop_back();
    }

    void exec_list(Frame& frame, const StmtList& list) {
        std::vector<SlotId> defined;
        for (const auto& s : list) {
            if (const auto* n = std::get_if<NewStmt>(&s.node)) {
                exec_new(frame, n->slot);
                defined.push_back(n->slot);
            } else if (const auto* op = std::get_if<OpStmt>(&s.node)) {
                exec_op(frame, *op);
            } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                exec_call(frame, *c);
            } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
                exec_list(frame, i->cond);
                if ((config_.path >> i->bitIndex) & 1u) {
                    exec_list(frame, i->then);
                } else if (i->otherwise) {
                    exec_list(frame, *i->otherwise);
                }
            } else if (const auto* l = std::get_if<LoopStmt>(&s.node)) {
                for (int trip = 0; trip < program_.plan.tripCount; ++trip) {
                    exec_list(frame, l->cond);
                    exec_list(frame, l->body);
                }
            }
        }
        if (!scalar_) {
            for (auto it = defined.rbegin(); it != defined.rend(); ++it) {
                auto& obj = frame.objects[static_cast<std::size_t>(it->value)];
                heap_.release(obj);
                obj = 0;
            }
        }
    }

    void exec_new(Frame& frame, SlotId slot) {
        auto& data = *frame.data;
        const auto index = static_cast<std::size_t>(slot.value);
        const bool alias = data.consumed < data.size();
        if (scalar_) {
            frame.scalars[index] = alias ? data.scalars[data.consumed++] : 0;
            emit({OpKind::New, static_cast<std::uint64_t>(slot.value) + 1, 0, alias ? 0 : 1});
            return;
        }
        // An alias takes over the reference the caller placed in Data.
        const ObjectId obj = alias ? data.objects[data.consumed++] : heap_.allocate();
        frame.objects[index] = obj;
        emit({OpKind::New, obj, 0, alias ? 0 : 1});
    }

    void exec_op(Frame& frame, const OpStmt& op) {
        const auto index = static_cast<std::size_t>(op.slot.value);
        if (scalar_) {
            auto& v = frame.scalars[index];
            std::int64_t res = 0;
            switch (op.kind) {
            case OpKind::Insert: res = ++v; break;
            case OpKind::Remove: res = --v; break;
            case OpKind::Contains: res = v == 0 ? 1 : 0; break;
            case OpKind::New: break;
            }
            emit({op.kind, static_cast<std::uint64_t>(op.slot.value) + 1, op.value, res});
            return;
        }
        const ObjectId obj = frame.objects[index];
        if (obj == 0) {
            throw OracleError("f" + std::to_string(frame.function->id.value) + ": slot " +
                              std::to_string(op.slot.value) + " used out of scope");
        }
        std::int64_t res = 0;
        switch (op.kind) {
        case OpKind::Insert: res = heap_.insert(obj, op.value); break;
        case OpKind::Remove: res = heap_.remove(obj, op.value) ? 1 : 0; break;
        case OpKind::Contains: res = heap_.contains(obj, op.value) ? 1 : 0; break;
        case OpKind::New: break;
        }
        emit({op.kind, obj, op.value, res});
    }

    void exec_call(Frame& frame, const CallStmt& c) {
        DataArgs args;
        for (const auto slot : c.available) {
            const auto index = static_cast<std::size_t>(slot.value);
            if (scalar_) {
                args.scalars.push_back(frame.scalars[index]);
            } else {
                const ObjectId obj = frame.objects[index];
                heap_.retain(obj);
                args.objects.push_back(obj);
            }
        }
        call(c.callee, args);
    }

    void emit(const TraceEvent& e) {
        ++result_.stats.opCounts[e.op];
        checksum_.add(e);
        if (config_.debugTrace) {
            result_.trace.push_back(e);
        }
        if (config_.checkRefcounts && !scalar_) {
            check_refcounts();
        }
        if (config_.onEvent) {
            config_.onEvent(e, heap_);
        }
    }

    // Every live reference is a bound slot in some frame or an unconsumed
    // Data entry on the call stack.
    void check_refcounts() const {
        std::int64_t refs = 0;
        for (const Frame* frame : stack_) {
            for (const auto obj : frame->objects) {
                refs += obj != 0 ? 1 : 0;
            }
            refs += static_cast<std::int64_t>(frame->data->objects.size() - frame->data->consumed);
        }
        const std::int64_t sum = heap_.recount();
        if (sum != refs || sum != heap_.refcount_sum()) {
            throw OracleError("refcount conservation violated: refC sum " + std::to_string(sum) + ", live references " +
                              std::to_string(refs));
        }
    }

    const Program& program_;
    const ExecConfig& config_;
    bool scalar_;
    Heap heap_;
    Checksum checksum_;
    RunResult result_;
    std::vector<Frame*> stack_;
};

} // namespace

RunResult interpret(const Program& program, const ExecConfig& config) {
    return Interpreter(program, config).run();
}

} // namespace lsysgen
