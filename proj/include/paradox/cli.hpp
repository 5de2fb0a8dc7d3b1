#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paradox/group.hpp"
#include "paradox/induced.hpp"

namespace paradox {

// Exit codes shared by every subcommand.
inline constexpr int kExitFound = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDual = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Translator-set spec: "ball:r" or a comma-separated element list.
std::vector<Elem> parse_translators(const Group& g, std::string_view text);

/// Input of `induce`: the X-level token witness with its subgroup and,
/// optionally, the element t to induce along. Empty overrides fall back to
/// the "group" and "subgroup" fields of the file.
struct InduceInput {
  Group group;
  SubgroupSpec subgroup;
  TokenWitness witness;
  std::optional<Elem> t;
};

InduceInput parse_induce_input(std::string_view text, std::string_view group_override = {},
                               std::string_view subgroup_override = {});

/// JSON of a token witness, with the induced witness under "output" when
/// one is given.
std::string token_witness_json(const SubgroupSpec& h, const TokenWitness& w,
                               const InducedWitness* induced = nullptr);

/// Runs the `paradox` command line. Certificates and reports go to `out`
/// (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paradox
