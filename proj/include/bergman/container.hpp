#pragma once

// Versioned text container for cached and exchanged tables.
//
//   bergman-container 1
//   kind moments
//   meta digits 128
//   meta domain lens
//   shape 122 122
//   <re> <im>          one line per entry, row-major, full-precision decimals
//   ...
//   checksum 1a2b3c4d  CRC-32 of every preceding byte
//
// No timestamps: identical inputs give byte-identical files.

#include "bergman/bergman.hpp"
#include "bergman/moments.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bergman {

struct Container {
    std::string kind;
    std::map<std::string, std::string> meta;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::pair<std::string, std::string>> values;  // (re, im) decimal strings

    const std::string& get(const std::string& key) const;
};

std::string serialize(const Container& c);
/// Throws FormatError on malformed input or checksum mismatch. A missing
/// checksum line is accepted only when `require_checksum` is false.
Container parse_container(const std::string& text, bool require_checksum = true);

/// Write via a temporary file and rename, holding an exclusive lock on `<path>.lock`.
void write_container(const std::filesystem::path& path, const Container& c);
/// Shared-locked read; nullopt when the file does not exist.
std::optional<Container> read_container(const std::filesystem::path& path, bool require_checksum = true);

Container to_container(const MomentMatrix& M);
MomentMatrix moments_from_container(const Container& c);

Container to_container(const LaurentSeries& s);
/// Custom-domain files may omit the checksum.
LaurentSeries series_from_container(const Container& c);

Container to_container(const BergmanBasis& b, const std::string& domain_tag);
BergmanBasis basis_from_container(const Container& c);
Container to_container(const HessenbergMatrix& H, const std::string& domain_tag, int digits);
HessenbergMatrix hessenberg_from_container(const Container& c);

/// File-name-safe tag: "ellipse:2" -> "ellipse-2".
std::string cache_tag(const std::string& domain_tag);

/// Loads `moments_<tag>_n<n_max>_d<digits>.txt` from `dir` when present and
/// valid, otherwise computes and stores it. A corrupt file is reported on
/// `warn` and recomputed. `reused` reports which path was taken.
MomentMatrix cached_moments(const DomainSpec& domain, int n_max, int digits, const QuadratureConfig& q,
                            const std::filesystem::path& dir, bool* reused = nullptr,
                            std::ostream* warn = nullptr);

}  // namespace bergman
