#pragma once

#include "packlim/certificate.hpp"
#include "packlim/limit.hpp"
#include "packlim/verify.hpp"

#include <string>

namespace packlim {

struct CertParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Strict, versioned certificate format (UTF-8 JSON): unknown fields are
/// rejected, exact scalars must be canonical "p/q", floating scalars are
/// shortest round-trip decimals. Serialization is byte-deterministic.
std::string serialize_certificate(const AnyCertificate& cert);
AnyCertificate parse_certificate(const std::string& text);

AnyCertificate load_certificate(const std::string& path);
void save_certificate(const AnyCertificate& cert, const std::string& path);

std::string serialize_verification_report(const VerificationReport& rep);

template <class S>
std::string serialize_limit_report(const LimitReport<S>& rep);

/// CSV of brick dimension rows; scalars may be "p/q" fractions or decimals
/// (decimals are read exactly).
std::vector<std::vector<Rat>> parse_dims_csv(const std::string& text);

/// Standalone target description in the certificate's target schema; scalars
/// may be "p/q" fractions or decimals.
Target parse_target_spec(const std::string& json_text);

} // namespace packlim
