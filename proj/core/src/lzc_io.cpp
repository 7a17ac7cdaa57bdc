#include "lazyc/wrap/lzc_io.hpp"

namespace lazyc::wrap {

using mcl::Expr;
using mcl::ExprPtr;
using mcl::FunctionDef;
using mcl::Stmt;

namespace {

constexpr char kMagic[4] = {'L', 'Z', 'C', '1'};

void put_opt_u64(ByteWriter& w, const std::optional<uint64_t>& v) {
    w.u8(v.has_value() ? 1 : 0);
    if (v) w.u64(*v);
}

std::optional<uint64_t> get_opt_u64(ByteReader& r) {
    if (r.u8() == 0) return std::nullopt;
    return r.u64();
}

void put_expr(ByteWriter& w, const Expr& e) {
    w.u8((uint8_t)e.kind);
    w.u256(e.int_val);
    w.u8(e.bool_val ? 1 : 0);
    w.str(e.name);
    w.u8((uint8_t)e.global);
    w.u8((uint8_t)e.op);
    w.u8((uint8_t)e.ref);
    w.u32(e.slot);
    w.str(e.state_key);
    w.u8((uint8_t)e.type);
    w.u8((e.a ? 1 : 0) | (e.b ? 2 : 0));
    if (e.a) put_expr(w, *e.a);
    if (e.b) put_expr(w, *e.b);
}

ExprPtr get_expr(ByteReader& r) {
    auto e = std::make_unique<Expr>();
    e->kind = (mcl::ExprKind)r.u8();
    e->int_val = r.u256();
    e->bool_val = r.u8() != 0;
    e->name = r.str();
    e->global = (mcl::GlobalKind)r.u8();
    e->op = (mcl::BinOp)r.u8();
    e->ref = (mcl::RefKind)r.u8();
    e->slot = r.u32();
    e->state_key = r.str();
    e->type = (mcl::McType)r.u8();
    uint8_t children = r.u8();
    if (children & 1) e->a = get_expr(r);
    if (children & 2) e->b = get_expr(r);
    return e;
}

void put_stmts(ByteWriter& w, const std::vector<Stmt>& body);

void put_stmt(ByteWriter& w, const Stmt& s) {
    w.u8((uint8_t)s.kind);
    w.u8((uint8_t)s.decl_type);
    w.str(s.name);
    w.u32(s.slot);
    w.str(s.callee_contract);
    w.str(s.callee_fn);
    w.u8((s.e1 ? 1 : 0) | (s.e2 ? 2 : 0));
    if (s.e1) put_expr(w, *s.e1);
    if (s.e2) put_expr(w, *s.e2);
    w.u32((uint32_t)s.args.size());
    for (const auto& a : s.args) put_expr(w, *a);
    put_stmts(w, s.body);
    put_stmts(w, s.els);
}

void put_stmts(ByteWriter& w, const std::vector<Stmt>& body) {
    w.u32((uint32_t)body.size());
    for (const auto& s : body) put_stmt(w, s);
}

std::vector<Stmt> get_stmts(ByteReader& r);

Stmt get_stmt(ByteReader& r) {
    Stmt s;
    s.kind = (mcl::StmtKind)r.u8();
    s.decl_type = (mcl::McType)r.u8();
    s.name = r.str();
    s.slot = r.u32();
    s.callee_contract = r.str();
    s.callee_fn = r.str();
    uint8_t exprs = r.u8();
    if (exprs & 1) s.e1 = get_expr(r);
    if (exprs & 2) s.e2 = get_expr(r);
    uint32_t nargs = r.u32();
    for (uint32_t i = 0; i < nargs; ++i) s.args.push_back(get_expr(r));
    s.body = get_stmts(r);
    s.els = get_stmts(r);
    return s;
}

std::vector<Stmt> get_stmts(ByteReader& r) {
    uint32_t n = r.u32();
    std::vector<Stmt> out;
    out.reserve(n);
    for (uint32_t i = 0; i < n; ++i) out.push_back(get_stmt(r));
    return out;
}

void put_usage(ByteWriter& w, const mcl::GlobalsUsage& u) {
    w.u8((u.block_number ? 1 : 0) | (u.msg_sender ? 2 : 0) | (u.msg_value ? 4 : 0));
}

mcl::GlobalsUsage get_usage(ByteReader& r) {
    uint8_t bits = r.u8();
    mcl::GlobalsUsage u;
    u.block_number = bits & 1;
    u.msg_sender = bits & 2;
    u.msg_value = bits & 4;
    return u;
}

void put_function(ByteWriter& w, const FunctionDef& f) {
    w.str(f.name);
    w.u32((uint32_t)f.params.size());
    for (const auto& p : f.params) {
        w.str(p.name);
        w.u8((uint8_t)p.type);
    }
    w.u8(f.payable ? 1 : 0);
    w.u32(f.local_count);
    put_usage(w, f.usage);
    w.u8(f.rewritten ? 1 : 0);
    put_stmts(w, f.body);
}

FunctionDef get_function(ByteReader& r) {
    FunctionDef f;
    f.name = r.str();
    uint32_t nparams = r.u32();
    for (uint32_t i = 0; i < nparams; ++i) {
        mcl::Param p;
        p.name = r.str();
        p.type = (mcl::McType)r.u8();
        f.params.push_back(std::move(p));
    }
    f.payable = r.u8() != 0;
    f.local_count = r.u32();
    f.usage = get_usage(r);
    f.rewritten = r.u8() != 0;
    f.body = get_stmts(r);
    return f;
}

void put_contract(ByteWriter& w, const mcl::ContractDef& c) {
    w.str(c.name);
    w.u32((uint32_t)c.state_vars.size());
    for (const auto& sv : c.state_vars) {
        w.str(sv.name);
        w.u8((uint8_t)sv.type);
        w.u8(sv.init ? 1 : 0);
        if (sv.init) put_expr(w, *sv.init);
    }
    w.u32((uint32_t)c.functions.size());
    for (const auto& f : c.functions) put_function(w, f);
}

mcl::ContractDef get_contract(ByteReader& r) {
    mcl::ContractDef c;
    c.name = r.str();
    uint32_t nvars = r.u32();
    for (uint32_t i = 0; i < nvars; ++i) {
        mcl::StateVar sv;
        sv.name = r.str();
        sv.type = (mcl::McType)r.u8();
        if (r.u8() != 0) sv.init = get_expr(r);
        c.state_vars.push_back(std::move(sv));
    }
    uint32_t nfns = r.u32();
    for (uint32_t i = 0; i < nfns; ++i) c.functions.push_back(get_function(r));
    return c;
}

} // namespace

std::vector<uint8_t> serialize_lzc(const LazyContract& lc) {
    ByteWriter w;
    w.raw(std::span<const uint8_t>((const uint8_t*)kMagic, 4));
    w.u256(lc.params.deposit);
    w.u64(lc.params.window);
    put_opt_u64(w, lc.params.max_total_gas_per_user);
    put_opt_u64(w, lc.params.max_gas_per_call);
    put_opt_u64(w, lc.params.max_call_count);
    put_opt_u64(w, lc.params.checkpoint_interval);
    w.u32((uint32_t)lc.originals.size());
    for (const auto& vc : lc.originals) put_contract(w, vc.def);
    w.u32((uint32_t)lc.rewritten.size());
    for (const auto& [key, fn] : lc.rewritten) {
        w.str(key);
        put_function(w, fn);
    }
    w.u32((uint32_t)lc.usage.size());
    for (const auto& [key, u] : lc.usage) {
        w.str(key);
        put_usage(w, u);
    }
    return w.take();
}

LazyContract deserialize_lzc(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    char magic[4];
    for (char& c : magic) c = (char)r.u8();
    if (std::string_view(magic, 4) != std::string_view(kMagic, 4))
        throw DecodeError("not a .lzc file");

    LazyParams params;
    params.deposit = r.u256();
    params.window = r.u64();
    params.max_total_gas_per_user = get_opt_u64(r);
    params.max_gas_per_call = get_opt_u64(r);
    params.max_call_count = get_opt_u64(r);
    params.checkpoint_interval = get_opt_u64(r);

    std::vector<mcl::ValidatedContract> originals;
    uint32_t ncontracts = r.u32();
    for (uint32_t i = 0; i < ncontracts; ++i)
        originals.push_back(mcl::ValidatedContract{get_contract(r)});

    std::map<std::string, FunctionDef> rewritten;
    uint32_t nfns = r.u32();
    for (uint32_t i = 0; i < nfns; ++i) {
        std::string key = r.str();
        rewritten.emplace(key, get_function(r));
    }
    std::map<std::string, mcl::GlobalsUsage> usage;
    uint32_t nusage = r.u32();
    for (uint32_t i = 0; i < nusage; ++i) {
        std::string key = r.str();
        usage.emplace(key, get_usage(r));
    }
    if (!r.done()) throw DecodeError("trailing bytes");

    // Rebuild from the originals and require agreement: the container's
    // rewritten bodies are data, not trusted code.
    LazyContract fresh = wrap_contract(std::move(originals), params);
    if (fresh.rewritten.size() != rewritten.size() || !(fresh.usage == usage))
        throw WrapError(WrapErrorKind::BadParams, "container does not match its sources");
    for (const auto& [key, fn] : fresh.rewritten) {
        auto it = rewritten.find(key);
        if (it == rewritten.end() || !mcl::structurally_equal(it->second, fn))
            throw WrapError(WrapErrorKind::BadParams,
                            "rewritten form mismatch for '" + key + "'");
    }
    return fresh;
}

} // namespace lazyc::wrap
