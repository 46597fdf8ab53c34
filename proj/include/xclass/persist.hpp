#pragma once

#include <stdexcept>
#include <string>

#include "xclass/classifier.hpp"

namespace xclass {

inline constexpr int kModelVersion = 1;

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class VersionError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};
class ChecksumError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};

// Text form: one header line "xclass-model <version> <fnv1a64 hex>" followed by
// a JSON body; the checksum covers the body bytes.
std::string serialize_model(const XClassModel& model);
XClassModel deserialize_model(const std::string& text);

void save_model(const XClassModel& model, const std::string& path);
XClassModel load_model(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace xclass
