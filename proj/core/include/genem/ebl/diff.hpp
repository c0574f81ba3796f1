#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "genem/ebl/ast.hpp"

namespace genem::ebl {

// Entry body with every call to a local helper replaced by the helper's body
// (arguments substituted). `origin[k]` is the index of the top-level entry
// statement that produced `body[k]`, and `label[k]` names it (call target,
// "repeat", "if" or "wait").
struct FlatBody {
    Block body;
    std::vector<std::size_t> origin;
    std::vector<std::string> label;
};

// Throws PreconditionError on an empty program or recursive helpers.
FlatBody flatten(const Program& program);

enum class EditKind { InsertedCall, RemovedCall, SwappedOrder, WrappedInRepeat, RetargetedCall };

std::string_view to_string(EditKind kind);

// One step of an edit script. Ops apply in order to a working copy of the
// flattened `before` body; `index` is a position in that working copy.
struct EditOp {
    EditKind kind = EditKind::InsertedCall;
    std::size_t index = 0;
    std::vector<Statement> statements;  // InsertedCall: inserted run; RetargetedCall: the replacement
    std::size_t length = 1;             // RemovedCall/WrappedInRepeat: run length; SwappedOrder: first block
    std::size_t second_length = 0;      // SwappedOrder: second block
    std::int64_t repeat_count = 0;      // WrappedInRepeat
    std::string subject;                // what the op is about, e.g. the inserted call
    std::string anchor;                 // InsertedCall: label now following; SwappedOrder: other block; RetargetedCall: old target

    bool operator==(const EditOp&) const = default;
};

using EditScript = std::vector<EditOp>;

// Minimal-cost statement-level edit script between the flattened entry
// bodies; deterministic. Identical programs give an empty script.
EditScript ast_diff(const Program& before, const Program& after);
EditScript diff_blocks(const FlatBody& before, const FlatBody& after);

// Replays a script. Throws PreconditionError when an op does not fit.
Block apply_edit_script(const Block& before, const EditScript& script);

// e.g. "InsertedCall(nod, before=base_rotate)"
std::string describe(const EditOp& op);
nlohmann::json to_json(const EditOp& op);
nlohmann::json to_json(const EditScript& script);

}  // namespace genem::ebl
