// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "krb/reduced_model.hpp"

namespace krb {

/// Writes a model as <dir>/manifest.json plus <dir>/payload.bin. The
/// payload is raw little-endian float64; the manifest records the variant,
/// dimensions, provenance, per-block offsets, and an FNV-1a content hash.
/// Round trips are bit-exact.
void save_model(const ReducedModel &model, const std::string &dir);

/// Loads and validates a saved model. Throws ManifestError on unreadable or
/// inconsistent manifests, PayloadSizeMismatch when the binary payload does
/// not match the recorded extents, ArityMismatch on block-count
/// inconsistencies, and HashMismatch when the content hash disagrees.
ReducedModel load_model(const std::string &dir);

} // namespace krb
