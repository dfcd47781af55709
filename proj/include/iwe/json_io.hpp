// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "iwe/certificates.hpp"
#include "iwe/oracle.hpp"

namespace iwe {

using json = nlohmann::ordered_json;

json to_json(const Rational& r);
json to_json(const ExtValue& v);
json to_json(const ExtNonNeg& v);
json to_json(const IWValue& v);
json to_json(const State& s);
json to_json(const CheckRow& r);
json to_json(const NonNegCheckReport& r);
json to_json(const IWReport& r, bool trace);
json to_json(const SubDistribution& d);
json to_json(const JordanReport& r);
json to_json(const ComparisonReport& r);
json to_json(const CertificateReport& r);
json to_json(const NonNegCertificateReport& r);

/// Inverse of to_json(IWValue); validates the pair.
IWValue iw_value_from_json(const json& j);

} // namespace iwe
