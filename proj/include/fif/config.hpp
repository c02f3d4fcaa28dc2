#pragma once

// Reader for the TOML-style model configuration files:
//
//   [model]
//   name = "example"
//   n = 3
//   interval = [0, 1]
//   y = [2, 0.5, 0.5, 2]
//
//   [scaling]
//   s1 = "0.5 + sin(2*pi*x)/4"
//   ...
//
//   [offsets]
//   q1 = "cos(2*pi*x/3)"        # or: weierstrass = "cos(2*pi*x)"
//
//   [tables]
//   hat = "(0, 0) (0.5, 1) (1, 0)"
//
// Only the subset of TOML needed here is supported: sections, comments,
// strings, numbers, booleans and (possibly multi-line) arrays.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fif/model.hpp"

namespace fif {

struct ConfigValue {
  enum class Kind { number, boolean, string, array };
  Kind kind = Kind::number;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<ConfigValue> items;
};

using ConfigSection = std::map<std::string, ConfigValue, std::less<>>;
using ConfigDocument = std::map<std::string, ConfigSection, std::less<>>;

ConfigDocument parse_config_document(std::string_view text);

ModelConfig model_config_from_document(const ConfigDocument& doc);

ModelConfig parse_model_config(std::string_view text);

/// Loads a model from a file path or from "builtin:NAME[:key=value,...]".
/// List-valued builtin parameters separate items with ';'.
ModelConfig load_model_config(std::string_view source);

}  // namespace fif
