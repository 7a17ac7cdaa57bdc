#include "lazyc/vm/interp.hpp"

#include "lazyc/encoding.hpp"

#include <cassert>

namespace lazyc::vm {

using mcl::ExprKind;
using mcl::GlobalKind;
using mcl::McType;
using mcl::StmtKind;

const char* outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Revert: return "revert";
    case Outcome::OutOfGas: return "out_of_gas";
    }
    return "?";
}

namespace {

constexpr int kMaxCallDepth = 1024;

struct RevertSignal {
    std::string reason;
};

struct Interp {
    const VmHost& host;
    const GasSchedule& sched;
    Storage& storage;
    Balances& balances; // real balances (eager) or b[.] (lazy)
    const CallEnv& env;
    const GlobalsSnapshot* snap; // non-null = lazy mode
    GasMeter meter;
    int depth = 0;

    struct Frame {
        const mcl::FunctionDef* fn;
        Address self;
        std::vector<Value> slots;
    };

    void collect_local_types(const std::vector<mcl::Stmt>& body,
                             std::vector<std::pair<uint32_t, McType>>& out) {
        for (const auto& s : body) {
            if (s.kind == StmtKind::LocalDecl) out.emplace_back(s.slot, s.decl_type);
            collect_local_types(s.body, out);
            collect_local_types(s.els, out);
        }
    }

    void run_function(const mcl::FunctionDef& fn, const Address& self,
                      std::span<const Value> args) {
        if (++depth > kMaxCallDepth) throw RevertSignal{"call depth exceeded"};
        Frame frame;
        frame.fn = &fn;
        frame.self = self;
        frame.slots.resize(fn.params.size() + fn.local_count);
        for (size_t i = 0; i < args.size(); ++i) frame.slots[i] = args[i];
        // Locals start at their typed default even when their declaration
        // sits in a branch that never runs.
        std::vector<std::pair<uint32_t, McType>> locals;
        collect_local_types(fn.body, locals);
        for (auto [slot, t] : locals) frame.slots[slot] = Value::default_of(t);
        exec_body(frame, fn.body);
        --depth;
    }

    void exec_body(Frame& fr, const std::vector<mcl::Stmt>& body) {
        for (const auto& s : body) exec_stmt(fr, s);
    }

    void exec_stmt(Frame& fr, const mcl::Stmt& s) {
        switch (s.kind) {
        case StmtKind::LocalDecl: {
            Value v = s.e1 ? eval(fr, *s.e1) : Value::default_of(s.decl_type);
            meter.charge(sched.local_write, "local_write");
            fr.slots[s.slot] = std::move(v);
            return;
        }
        case StmtKind::Assign: {
            Value v = eval(fr, *s.e2);
            store(fr, *s.e1, std::move(v));
            return;
        }
        case StmtKind::If: {
            bool cond = eval(fr, *s.e1).as_bool();
            exec_body(fr, cond ? s.body : s.els);
            return;
        }
        case StmtKind::While: {
            for (;;) {
                meter.charge(sched.loop_iteration_overhead, "loop_iteration_overhead");
                if (!eval(fr, *s.e1).as_bool()) break;
                exec_body(fr, s.body);
            }
            return;
        }
        case StmtKind::Require: {
            meter.charge(sched.require_op, "require_op");
            if (!eval(fr, *s.e1).as_bool())
                throw RevertSignal{"require failed at " + std::to_string(s.loc.line) + ":" +
                                   std::to_string(s.loc.col)};
            return;
        }
        case StmtKind::Transfer: {
            if (snap != nullptr)
                throw InternalInvariantViolation("transfer node in rewritten body");
            meter.charge(sched.transfer_op, "transfer_op");
            Address to = eval(fr, *s.e1).as_address();
            U256 amount = eval(fr, *s.e2).as_uint();
            // Credit before debit, mirroring the rewrite's statement order.
            if (!credit(balances, to, amount)) throw RevertSignal{"transfer overflow"};
            if (!debit(balances, fr.self, amount))
                throw RevertSignal{"insufficient contract balance"};
            return;
        }
        case StmtKind::ExprStmt:
            eval(fr, *s.e1);
            return;
        case StmtKind::CallStmt: {
            meter.charge(sched.internal_call, "internal_call");
            std::vector<Value> args;
            args.reserve(s.args.size());
            for (const auto& a : s.args) args.push_back(eval(fr, *a));
            if (host.functions == nullptr)
                throw InternalInvariantViolation("no dispatch table for call to " +
                                                 s.callee_contract + "." + s.callee_fn);
            auto it = host.functions->find(s.callee_contract + "." + s.callee_fn);
            if (it == host.functions->end())
                throw InternalInvariantViolation("unresolved callee " + s.callee_contract +
                                                 "." + s.callee_fn);
            // Rewritten callees carry the leading ledger-index parameter;
            // forward the caller's (the snapshot context is shared anyway).
            std::vector<Value> final_args;
            if (it->second.fn->rewritten) {
                final_args.push_back(Value(U256{0}));
                if (snap == nullptr)
                    throw InternalInvariantViolation("rewritten callee in eager mode");
            }
            for (auto& a : args) final_args.push_back(std::move(a));
            run_function(*it->second.fn, it->second.self, final_args);
            return;
        }
        }
    }

    // Storage write cost: fresh (zero/absent -> nonzero) pays
    // storage_write_new, everything else storage_write_update.
    uint64_t write_cost(bool was_default, bool now_default) const {
        return (was_default && !now_default) ? sched.storage_write_new
                                             : sched.storage_write_update;
    }

    void store(Frame& fr, const mcl::Expr& lv, Value v) {
        switch (lv.kind) {
        case ExprKind::VarRef:
            if (lv.ref == mcl::RefKind::State) {
                auto it = storage.find(lv.state_key);
                bool was_default = it == storage.end() || it->second.is_default();
                meter.charge(write_cost(was_default, v.is_default()), "storage_write");
                storage[lv.state_key] = std::move(v);
            } else {
                meter.charge(sched.local_write, "local_write");
                fr.slots[lv.slot] = std::move(v);
            }
            return;
        case ExprKind::MapIndex: {
            Address key = eval(fr, *lv.a).as_address();
            auto& slot = storage[lv.state_key];
            if (!std::holds_alternative<MapValue>(slot.v)) slot = Value(MapValue{});
            MapValue& m = slot.as_map();
            auto it = m.find(key);
            bool was_default = it == m.end();
            const U256& nv = v.as_uint();
            meter.charge(write_cost(was_default, nv.is_zero()), "storage_write");
            if (nv.is_zero()) m.erase(key); // zero entries are never stored
            else m[key] = nv;
            return;
        }
        case ExprKind::LBal: {
            if (snap == nullptr)
                throw InternalInvariantViolation("b[.] write in eager mode");
            Address key = eval(fr, *lv.a).as_address();
            U256 cur = balance_of(balances, key);
            const U256& nv = v.as_uint();
            meter.charge(write_cost(cur.is_zero(), nv.is_zero()), "storage_write");
            if (nv.is_zero()) balances.erase(key);
            else balances[key] = nv;
            return;
        }
        default:
            throw InternalInvariantViolation("bad assignment target");
        }
    }

    Value eval(Frame& fr, const mcl::Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: return Value(e.int_val);
        case ExprKind::AddrLit: return Value(Address{e.name});
        case ExprKind::BoolLit: return Value(e.bool_val);
        case ExprKind::ThisAddr: return Value(fr.self);
        case ExprKind::VarRef:
            if (e.ref == mcl::RefKind::State) {
                meter.charge(sched.storage_read, "storage_read");
                auto it = storage.find(e.state_key);
                return it == storage.end() ? Value(U256{}) : it->second;
            }
            meter.charge(sched.local_read, "local_read");
            return fr.slots[e.slot];
        case ExprKind::GlobalRef: {
            if (snap != nullptr)
                throw InternalInvariantViolation("global ref in rewritten body");
            meter.charge(sched.local_read, "global_read");
            switch (e.global) {
            case GlobalKind::BlockNumber: return Value(U256(env.block_number));
            case GlobalKind::MsgSender: return Value(env.msg_sender);
            case GlobalKind::MsgValue: return Value(env.msg_value);
            }
            break;
        }
        case ExprKind::SnapGlobal: {
            if (snap == nullptr)
                throw InternalInvariantViolation("snapshot read in eager mode");
            meter.charge(sched.storage_read, "snapshot_read");
            switch (e.global) {
            case GlobalKind::BlockNumber:
                if (!snap->block_number) break;
                return Value(U256(*snap->block_number));
            case GlobalKind::MsgSender:
                if (!snap->msg_sender) break;
                return Value(*snap->msg_sender);
            case GlobalKind::MsgValue:
                if (!snap->msg_value) break;
                return Value(*snap->msg_value);
            }
            throw InternalInvariantViolation(std::string("snapshot missing ") +
                                             mcl::global_name(e.global));
        }
        case ExprKind::Binary: return eval_binary(fr, e);
        case ExprKind::Not: {
            meter.charge(sched.compare_op, "compare_op");
            return Value(!eval(fr, *e.a).as_bool());
        }
        case ExprKind::Hash: {
            meter.charge(sched.hash_op, "hash_op");
            Value v = eval(fr, *e.a);
            ByteWriter w;
            encode_value(w, v);
            Digest d = (*host.hash)(w.data());
            return Value(U256::from_bytes(std::span<const uint8_t, 32>(d.data(), 32)));
        }
        case ExprKind::BalanceOf: {
            if (snap != nullptr)
                throw InternalInvariantViolation("balance() in rewritten body");
            meter.charge(sched.balance_read, "balance_read");
            Address a = eval(fr, *e.a).as_address();
            return Value(balance_of(balances, a));
        }
        case ExprKind::LBal: {
            if (snap == nullptr)
                throw InternalInvariantViolation("b[.] read in eager mode");
            meter.charge(sched.storage_read, "lbal_read");
            Address a = eval(fr, *e.a).as_address();
            return Value(balance_of(balances, a));
        }
        case ExprKind::MapIndex: {
            meter.charge(sched.storage_read, "storage_read");
            Address key = eval(fr, *e.a).as_address();
            auto it = storage.find(e.state_key);
            if (it == storage.end()) return Value(U256{});
            const MapValue& m = it->second.as_map();
            auto mit = m.find(key);
            return mit == m.end() ? Value(U256{}) : Value(mit->second);
        }
        }
        throw InternalInvariantViolation("unknown expression kind");
    }

    Value eval_binary(Frame& fr, const mcl::Expr& e) {
        using mcl::BinOp;
        switch (e.op) {
        case BinOp::And: {
            meter.charge(sched.compare_op, "compare_op");
            if (!eval(fr, *e.a).as_bool()) return Value(false);
            return Value(eval(fr, *e.b).as_bool());
        }
        case BinOp::Or: {
            meter.charge(sched.compare_op, "compare_op");
            if (eval(fr, *e.a).as_bool()) return Value(true);
            return Value(eval(fr, *e.b).as_bool());
        }
        case BinOp::Eq:
        case BinOp::Ne: {
            meter.charge(sched.compare_op, "compare_op");
            Value a = eval(fr, *e.a);
            Value b = eval(fr, *e.b);
            bool eq = a == b;
            return Value(e.op == BinOp::Eq ? eq : !eq);
        }
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: {
            meter.charge(sched.compare_op, "compare_op");
            const U256 a = eval(fr, *e.a).as_uint();
            const U256 b = eval(fr, *e.b).as_uint();
            int c = compare(a, b);
            switch (e.op) {
            case BinOp::Lt: return Value(c < 0);
            case BinOp::Le: return Value(c <= 0);
            case BinOp::Gt: return Value(c > 0);
            default: return Value(c >= 0);
            }
        }
        default: {
            meter.charge(sched.arith_op, "arith_op");
            const U256 a = eval(fr, *e.a).as_uint();
            const U256 b = eval(fr, *e.b).as_uint();
            U256 r;
            bool ok = false;
            const char* what = "";
            switch (e.op) {
            case BinOp::Add: ok = checked_add(a, b, r); what = "overflow"; break;
            case BinOp::Sub: ok = checked_sub(a, b, r); what = "underflow"; break;
            case BinOp::Mul: ok = checked_mul(a, b, r); what = "overflow"; break;
            case BinOp::Div: ok = checked_div(a, b, r); what = "division by zero"; break;
            case BinOp::Mod: ok = checked_mod(a, b, r); what = "modulo by zero"; break;
            default: break;
            }
            if (!ok)
                throw RevertSignal{std::string("arithmetic ") + what + " at " +
                                   std::to_string(e.loc.line) + ":" + std::to_string(e.loc.col)};
            return Value(r);
        }
        }
    }
};

void check_args(const mcl::FunctionDef& f, std::span<const Value> args, bool rewritten_extra) {
    size_t expected = f.params.size();
    if (args.size() != expected)
        throw ArgumentMismatch("call to '" + f.name + "' expects " + std::to_string(expected) +
                               " arguments, got " + std::to_string(args.size()));
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i].type() != f.params[i].type)
            throw ArgumentMismatch("argument " + std::to_string(i + 1) + " of '" + f.name +
                                   "' expects " + mcl::type_name(f.params[i].type));
    }
    (void)rewritten_extra;
}

std::map<Address, SignedAmount> diff_balances(const Balances& before, const Balances& after) {
    std::map<Address, SignedAmount> deltas;
    for (const auto& [a, x] : after) {
        U256 prev = balance_of(before, a);
        if (prev == x) continue;
        SignedAmount d;
        if (x >= prev) d.magnitude = sub_exact(x, prev);
        else {
            d.negative = true;
            d.magnitude = sub_exact(prev, x);
        }
        deltas[a] = d;
    }
    for (const auto& [a, x] : before) {
        if (after.count(a)) continue;
        if (x.is_zero()) continue;
        deltas[a] = SignedAmount{true, x};
    }
    return deltas;
}

} // namespace

Storage initial_storage(const mcl::ContractDef& c) {
    Storage s;
    for (const auto& sv : c.state_vars) {
        std::string key = c.name + "." + sv.name;
        if (!sv.init) {
            s[key] = Value::default_of(sv.type);
            continue;
        }
        switch (sv.init->kind) {
        case ExprKind::IntLit: s[key] = Value(sv.init->int_val); break;
        case ExprKind::AddrLit: s[key] = Value(Address{sv.init->name}); break;
        case ExprKind::BoolLit: s[key] = Value(sv.init->bool_val); break;
        default:
            throw InternalInvariantViolation("non-literal state initializer");
        }
    }
    return s;
}

ExecutionResult execute_call(const VmHost& host, const mcl::FunctionDef& f,
                             const Address& self, std::span<const Value> args,
                             const CallEnv& env, const Storage& storage_before,
                             const Balances& balances_before,
                             const GlobalsSnapshot* snapshot, GasTrace* trace) {
    assert(host.schedule && host.hash);
    check_args(f, args, f.rewritten);
    if (!f.payable && snapshot == nullptr && !env.msg_value.is_zero())
        throw ArgumentMismatch("non-payable function '" + f.name + "' given msg.value");

    ExecutionResult res;
    Storage storage = storage_before;
    Balances balances = balances_before;

    Interp in{host, *host.schedule, storage, balances, env, snapshot,
              GasMeter{env.gas_limit, 0, trace}};

    try {
        // Eager payable semantics: the attached value moves before the body
        // runs and is undone with everything else on revert. Rewritten
        // bodies carry this transfer as an explicit prologue instead.
        if (f.payable && snapshot == nullptr && !env.msg_value.is_zero()) {
            if (!credit(balances, self, env.msg_value)) throw RevertSignal{"value overflow"};
            if (!debit(balances, env.msg_sender, env.msg_value))
                throw RevertSignal{"insufficient balance for msg.value"};
        }
        in.run_function(f, self, args);
        res.outcome = Outcome::Success;
        res.gas_used = in.meter.used;
        res.storage_after = std::move(storage);
        res.balances_after = std::move(balances);
        res.balance_deltas = diff_balances(balances_before, res.balances_after);
    } catch (const RevertSignal& sig) {
        res.outcome = Outcome::Revert;
        res.gas_used = in.meter.used;
        res.storage_after = storage_before;
        res.balances_after = balances_before;
        res.revert_reason = sig.reason;
    } catch (const OutOfGas&) {
        res.outcome = Outcome::OutOfGas;
        res.gas_used = env.gas_limit;
        res.storage_after = storage_before;
        res.balances_after = balances_before;
        res.revert_reason = "out of gas";
    }
    return res;
}

} // namespace lazyc::vm
