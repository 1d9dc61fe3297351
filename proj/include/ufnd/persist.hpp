#pragma once

#include "ufnd/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace ufnd {

inline constexpr char kModelMagic[4] = {'U', 'F', 'N', 'D'};
inline constexpr uint16_t kModelMajorVersion = 1;
inline constexpr uint16_t kModelMinorVersion = 0;

/// Little-endian container: magic "UFND", major/minor version, classifier
/// kind, preprocessing config and resources, n-gram spec, then either
/// vocabulary + idf + selection mask + SVM, or encoder + CNN weights.
void write_model(std::ostream& out, const Pipeline& pipeline);
/// Throws ModelFormatError on a bad magic, a newer major version, truncation
/// or an inconsistent payload.
Pipeline read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Pipeline& pipeline);
Pipeline load_model(const std::filesystem::path& path);

}  // namespace ufnd
