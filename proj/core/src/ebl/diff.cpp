#include "genem/ebl/diff.hpp"

#include <limits>
#include <map>

#include "genem/ebl/callee.hpp"
#include "genem/ebl/printer.hpp"
#include "genem/error.hpp"

namespace genem::ebl {

std::string_view to_string(EditKind kind) {
    switch (kind) {
        case EditKind::InsertedCall: return "InsertedCall";
        case EditKind::RemovedCall: return "RemovedCall";
        case EditKind::SwappedOrder: return "SwappedOrder";
        case EditKind::WrappedInRepeat: return "WrappedInRepeat";
        case EditKind::RetargetedCall: return "RetargetedCall";
    }
    return "";
}

namespace {

using Env = std::map<std::string, Value, std::less<>>;

constexpr int kMaxInlineDepth = 64;

Value substitute(const Value& v, const Env& env) {
    if (const auto* ref = std::get_if<NameRef>(&v))
        if (const auto it = env.find(ref->name); it != env.end()) return it->second;
    return v;
}

Call substitute(const Call& call, const Env& env) {
    Call out = call;
    for (auto& arg : out.args) arg.value = substitute(arg.value, env);
    return out;
}

void inline_block(const Block& src, const Program& program, const Env& env, Block& out, int depth) {
    if (depth > kMaxInlineDepth) throw PreconditionError("flatten: recursive helper skills");
    for (const auto& stmt : src) {
        if (const auto* call = std::get_if<Call>(&stmt.node)) {
            const auto* helper = program.find(call->target);
            if (!helper) {
                out.push_back({substitute(*call, env)});
                continue;
            }
            const auto specs = param_specs(*helper);
            const auto binding = bind_args(*call, specs);
            Env inner;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                if (const auto* arg = binding.by_param[i])
                    inner[specs[i].name] = substitute(arg->value, env);
                else if (specs[i].default_value)
                    inner[specs[i].name] = *specs[i].default_value;
            }
            inline_block(helper->body, program, inner, out, depth + 1);
        } else if (const auto* rep = std::get_if<Repeat>(&stmt.node)) {
            Repeat r{rep->count, {}, rep->loc};
            inline_block(rep->body, program, env, r.body, depth);
            out.push_back({std::move(r)});
        } else if (const auto* branch = std::get_if<If>(&stmt.node)) {
            If b{substitute(branch->predicate, env), {}, std::nullopt, branch->loc};
            inline_block(branch->then_body, program, env, b.then_body, depth);
            if (branch->else_body) {
                b.else_body.emplace();
                inline_block(*branch->else_body, program, env, *b.else_body, depth);
            }
            out.push_back({std::move(b)});
        } else {
            const auto& w = std::get<Wait>(stmt.node);
            out.push_back({Wait{substitute(w.duration, env), w.loc}});
        }
    }
}

std::string label_of(const Statement& stmt) {
    if (const auto* call = std::get_if<Call>(&stmt.node)) return call->target;
    if (std::holds_alternative<Repeat>(stmt.node)) return "repeat";
    if (std::holds_alternative<If>(stmt.node)) return "if";
    return "wait";
}

}  // namespace

FlatBody flatten(const Program& program) {
    const auto* entry = program.entry();
    if (!entry) throw PreconditionError("flatten: program has no skills");
    FlatBody flat;
    for (std::size_t k = 0; k < entry->body.size(); ++k) {
        const auto start = flat.body.size();
        inline_block({entry->body[k]}, program, {}, flat.body, 0);
        for (auto i = start; i < flat.body.size(); ++i) {
            flat.origin.push_back(k);
            flat.label.push_back(label_of(entry->body[k]));
        }
    }
    return flat;
}

namespace {

enum class Move { Match, Swap, Wrap, Subst, Delete, Insert };

constexpr std::size_t kMaxSwapBlock = 16;

bool equal_run(const Block& a, std::size_t ai, const Block& b, std::size_t bi, std::size_t len) {
    for (std::size_t k = 0; k < len; ++k)
        if (!(a[ai + k] == b[bi + k])) return false;
    return true;
}

EditOp make_op(EditKind kind, std::size_t index) {
    EditOp op;
    op.kind = kind;
    op.index = index;
    return op;
}

struct Choice {
    Move move = Move::Insert;
    std::size_t p = 0;  // swap: first block; wrap: run length
    std::size_t q = 0;  // swap: second block
};

}  // namespace

EditScript diff_blocks(const FlatBody& before, const FlatBody& after) {
    const auto& a = before.body;
    const auto& b = after.body;
    const std::size_t n = a.size(), m = b.size();
    const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    std::vector<std::size_t> cost((n + 1) * (m + 1), 0);
    std::vector<Choice> choice((n + 1) * (m + 1));

    // cost[i][j]: cheapest script turning a[i..] into b[j..]
    for (std::size_t ii = n + 1; ii-- > 0;) {
        for (std::size_t jj = m + 1; jj-- > 0;) {
            const auto i = ii, j = jj;
            if (i == n && j == m) continue;
            auto best = std::numeric_limits<std::size_t>::max();
            Choice pick;
            const auto consider = [&](std::size_t c, Choice ch) {
                if (c < best) best = c, pick = ch;
            };
            if (i < n && j < m && a[i] == b[j]) consider(cost[at(i + 1, j + 1)], {Move::Match});
            for (std::size_t p = 1; p <= kMaxSwapBlock && i + p < n; ++p)
                for (std::size_t q = 1; q <= kMaxSwapBlock && i + p + q <= n && j + p + q <= m; ++q)
                    if (equal_run(a, i, b, j + q, p) && equal_run(a, i + p, b, j, q))
                        consider(1 + cost[at(i + p + q, j + p + q)], {Move::Swap, p, q});
            if (j < m)
                if (const auto* rep = std::get_if<Repeat>(&b[j].node)) {
                    const auto k = rep->body.size();
                    if (k > 0 && i + k <= n && equal_run(a, i, rep->body, 0, k))
                        consider(1 + cost[at(i + k, j + 1)], {Move::Wrap, k});
                }
            if (i < n && j < m && std::holds_alternative<Call>(a[i].node) && std::holds_alternative<Call>(b[j].node))
                consider(1 + cost[at(i + 1, j + 1)], {Move::Subst});
            if (i < n) consider(1 + cost[at(i + 1, j)], {Move::Delete});
            if (j < m) consider(1 + cost[at(i, j + 1)], {Move::Insert});
            cost[at(i, j)] = best;
            choice[at(i, j)] = pick;
        }
    }

    // Walk forward; the working copy is always b[..j) ++ a[i..).
    EditScript script;
    std::size_t last_insert_origin = 0, last_remove_origin = 0;
    bool merging_insert = false, merging_remove = false;
    std::size_t i = 0, j = 0;
    const auto anchor_after = [&](std::size_t jn) { return jn < m ? after.label[jn] : std::string(); };
    while (i < n || j < m) {
        const auto ch = choice[at(i, j)];
        const bool was_insert = merging_insert, was_remove = merging_remove;
        merging_insert = merging_remove = false;
        switch (ch.move) {
            case Move::Match:
                ++i, ++j;
                break;
            case Move::Swap: {
                auto op = make_op(EditKind::SwappedOrder, j);
                op.length = ch.p;
                op.second_length = ch.q;
                op.subject = before.label[i];
                op.anchor = before.label[i + ch.p];
                script.push_back(std::move(op));
                i += ch.p + ch.q, j += ch.p + ch.q;
                break;
            }
            case Move::Wrap: {
                auto op = make_op(EditKind::WrappedInRepeat, j);
                op.length = ch.p;
                op.repeat_count = std::get<Repeat>(b[j].node).count;
                op.subject = before.label[i];
                script.push_back(std::move(op));
                i += ch.p, j += 1;
                break;
            }
            case Move::Subst: {
                auto op = make_op(EditKind::RetargetedCall, j);
                op.statements = {b[j]};
                op.subject = after.label[j];
                op.anchor = before.label[i];
                script.push_back(std::move(op));
                ++i, ++j;
                break;
            }
            case Move::Delete:
                if (was_remove && last_remove_origin == before.origin[i] && script.back().index == j) {
                    ++script.back().length;
                } else {
                    auto op = make_op(EditKind::RemovedCall, j);
                    op.subject = before.label[i];
                    script.push_back(std::move(op));
                }
                last_remove_origin = before.origin[i];
                merging_remove = true;
                ++i;
                break;
            case Move::Insert:
                if (was_insert && last_insert_origin == after.origin[j]) {
                    script.back().statements.push_back(b[j]);
                } else {
                    auto op = make_op(EditKind::InsertedCall, j);
                    op.statements = {b[j]};
                    op.subject = after.label[j];
                    script.push_back(std::move(op));
                }
                script.back().anchor = anchor_after(j + 1);
                last_insert_origin = after.origin[j];
                merging_insert = true;
                ++j;
                break;
        }
    }
    return script;
}

EditScript ast_diff(const Program& before, const Program& after) { return diff_blocks(flatten(before), flatten(after)); }

Block apply_edit_script(const Block& before, const EditScript& script) {
    Block w = before;
    const auto fail = [](const EditOp& op) {
        throw PreconditionError("edit op " + describe(op) + " does not apply at index " + std::to_string(op.index));
    };
    for (const auto& op : script) {
        const auto it = w.begin() + static_cast<std::ptrdiff_t>(std::min(op.index, w.size()));
        switch (op.kind) {
            case EditKind::InsertedCall:
                if (op.index > w.size()) fail(op);
                w.insert(it, op.statements.begin(), op.statements.end());
                break;
            case EditKind::RemovedCall:
                if (op.index + op.length > w.size()) fail(op);
                w.erase(it, it + static_cast<std::ptrdiff_t>(op.length));
                break;
            case EditKind::SwappedOrder: {
                if (op.index + op.length + op.second_length > w.size()) fail(op);
                std::rotate(it, it + static_cast<std::ptrdiff_t>(op.length),
                            it + static_cast<std::ptrdiff_t>(op.length + op.second_length));
                break;
            }
            case EditKind::WrappedInRepeat: {
                if (op.index + op.length > w.size()) fail(op);
                Repeat r{op.repeat_count, Block(it, it + static_cast<std::ptrdiff_t>(op.length)), {}};
                const auto pos = w.erase(it, it + static_cast<std::ptrdiff_t>(op.length));
                w.insert(pos, Statement{std::move(r)});
                break;
            }
            case EditKind::RetargetedCall:
                if (op.index >= w.size() || op.statements.size() != 1) fail(op);
                *it = op.statements.front();
                break;
        }
    }
    return w;
}

std::string describe(const EditOp& op) {
    std::string out(to_string(op.kind));
    switch (op.kind) {
        case EditKind::InsertedCall:
            return out + "(" + op.subject + (op.anchor.empty() ? ", at=end)" : ", before=" + op.anchor + ")");
        case EditKind::RemovedCall:
            return out + "(" + op.subject + ")";
        case EditKind::SwappedOrder:
            return out + "(" + op.subject + ", " + op.anchor + ")";
        case EditKind::WrappedInRepeat:
            return out + "(" + op.subject + ", times=" + std::to_string(op.repeat_count) + ")";
        case EditKind::RetargetedCall:
            return out + "(" + op.anchor + " -> " + op.subject + ")";
    }
    return out;
}

nlohmann::json to_json(const EditOp& op) {
    nlohmann::json statements = nlohmann::json::array();
    for (const auto& s : op.statements) statements.push_back(print(s));
    nlohmann::json j{{"kind", to_string(op.kind)},
                     {"index", op.index},
                     {"subject", op.subject},
                     {"summary", describe(op)},
                     {"length", op.length}};
    if (!op.anchor.empty()) j["anchor"] = op.anchor;
    if (!statements.empty()) j["statements"] = statements;
    if (op.kind == EditKind::SwappedOrder) j["second_length"] = op.second_length;
    if (op.kind == EditKind::WrappedInRepeat) j["repeat_count"] = op.repeat_count;
    return j;
}

nlohmann::json to_json(const EditScript& script) {
    auto j = nlohmann::json::array();
    for (const auto& op : script) j.push_back(to_json(op));
    return j;
}

}  // namespace genem::ebl
