#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "paradox/crossed_product.hpp"
#include "paradox/group.hpp"
#include "paradox/paradox.hpp"

namespace paradox {

inline constexpr std::string_view kCertSchema = "paradox-cert/v1";

/// A paradox witness together with the window it was checked on.
struct WitnessCert {
  ParadoxWitness witness;
  Window window;
};

/// Proper-infiniteness data for 1_A together with the window it was checked on.
struct CPWitnessCert {
  PIWitness witness;
  Window window;
};

using Certificate = std::variant<MatchCert, DeficiencyCert, WitnessCert, FlowCert, FlowDeficiency, CPWitnessCert>;

// "match", "deficiency", "witness", "flow", "flow-deficiency" or "cp-witness".
std::string certificate_kind(const Certificate& c);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Digest of a window: the group spec followed by one canonical element
/// string per line, in window order.
std::string window_digest(const Window& w);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
/// The content digest covers every field except itself; the producer field
/// is inside its scope but carries no timestamp, so output is
/// byte-identical for identical input.
std::string write_certificate(const Certificate& c, int slack = 4);

/// Outcome of replaying a certificate.
struct VerifyOutcome {
  // 0 valid, 1 unreadable or foreign schema, 3 verification failure.
  int exit_code = 0;
  std::string kind;
  // First violated fact, or a summary of the passed checks.
  std::string message;
};

/// Replays a certificate with solver-free checks. Schema problems give
/// exit code 1; anything wrong with the payload, including fields that do
/// not decode, gives 3.
VerifyOutcome verify_certificate(std::string_view text);

/// Decodes a certificate without verifying it. Throws Error on malformed
/// input.
struct DecodedCertificate {
  Certificate cert;
  int slack = 4;
};
DecodedCertificate read_certificate(std::string_view text);

}  // namespace paradox
