#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "coinsim/automaton.hpp"
#include "coinsim/block.hpp"
#include "coinsim/dice.hpp"
#include "coinsim/pushdown.hpp"

namespace coinsim {

inline constexpr int kDocumentVersion = 1;

/// One machine per JSON document, tagged by "kind": finite, block, pushdown
/// or dice-block. Big integers are decimal strings; pushdown symbol laws are
/// expression strings in p.
using MachineDocument = std::variant<FiniteCoinAutomaton, BlockSimulation, PushdownCoinAutomaton, DiceBlockSimulation>;

std::string_view document_kind(const MachineDocument& doc);

/// Pretty-printed with sorted keys and a trailing newline, so equal machines
/// serialize to identical bytes.
std::string serialize_document(const MachineDocument& doc);

/// Strict: unknown or missing fields, wrong types, unsupported versions and
/// structurally invalid machines all throw Error(kParseError).
MachineDocument parse_document(std::string_view text);

MachineDocument read_document(const std::filesystem::path& path);
void write_document(const std::filesystem::path& path, const MachineDocument& doc);

}  // namespace coinsim
