#ifndef EVCOREF_TEXT_IO_H_
#define EVCOREF_TEXT_IO_H_

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evcoref {

// Malformed or inconsistent input data (bad file contents, unknown ids).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration values or command-line usage.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);

// Parses a double, rejecting trailing garbage.
double ParseDouble(std::string_view text);

// Splits on '\t' keeping empty fields.
std::vector<std::string_view> SplitTabs(std::string_view line);

// Strips a trailing '\r' so files written on Windows still parse.
std::string_view StripCarriageReturn(std::string_view line);

std::ifstream OpenInput(const std::filesystem::path& path);
std::ofstream OpenOutput(const std::filesystem::path& path);

}  // namespace evcoref

#endif  // EVCOREF_TEXT_IO_H_
