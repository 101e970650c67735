#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>

#include "robcred/simulation.hpp"

namespace robcred {

// Configuration / input-data problems; carry the offending line when known.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")"
                                      : what),
          line_number(line) {}
    int line_number;
};

// Flat sectioned key=value text: `[section]` headers, `key = value` lines,
// `#` comments, blank lines ignored. Duplicate keys within a section are an
// error.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

ConfigSections parse_config(std::istream& in);
ConfigSections parse_config_file(const std::string& path);

// Builds a contamination-study configuration from sections
// [prior] [central] [contaminant] [grids] [run]; see configs/ for examples.
StudyConfig study_config_from(const ConfigSections& sections);

}  // namespace robcred
