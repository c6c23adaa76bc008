#include "bergman/container.hpp"

#include "bergman/errors.hpp"

#include <boost/crc.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace bergman {

namespace {

constexpr const char* kMagic = "bergman-container 1";

std::string crc_hex(const std::string& bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", crc.checksum());
    return buf;
}

// RAII flock on a sidecar lock file.
class FileLock {
public:
    FileLock(const std::filesystem::path& target, int op) {
        const auto lock_path = target.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw FormatError("cannot open lock file " + lock_path);
        if (::flock(fd_, op) != 0) {
            ::close(fd_);
            throw FormatError("cannot lock " + lock_path);
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("bad integer for ") + what + ": " + s);
    }
}

Real parse_real(const std::string& s) {
    try {
        return from_decimal(s);
    } catch (const std::exception&) {
        throw FormatError("bad decimal: " + s);
    }
}

Complex value_at(const Container& c, std::size_t i, std::size_t j) {
    const auto& v = c.values[i * c.cols + j];
    return Complex(parse_real(v.first), parse_real(v.second));
}

std::string format_log10(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

Container dense_container(const std::string& kind, const Dense<Complex>& d) {
    Container c;
    c.kind = kind;
    c.rows = d.rows();
    c.cols = d.cols();
    c.values.reserve(c.rows * c.cols);
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j) c.values.emplace_back(to_decimal(d(i, j).real()), to_decimal(d(i, j).imag()));
    return c;
}

Dense<Complex> dense_from(const Container& c) {
    Dense<Complex> d(c.rows, c.cols);
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j) d(i, j) = value_at(c, i, j);
    return d;
}

void expect_kind(const Container& c, const char* kind) {
    if (c.kind != kind) throw FormatError("expected a '" + std::string(kind) + "' container, got '" + c.kind + "'");
}

}  // namespace

const std::string& Container::get(const std::string& key) const {
    auto it = meta.find(key);
    if (it == meta.end()) throw FormatError("container is missing '" + key + "'");
    return it->second;
}

std::string serialize(const Container& c) {
    if (c.values.size() != c.rows * c.cols) throw UsageError("container shape does not match its values");
    std::ostringstream out;
    out << kMagic << '\n' << "kind " << c.kind << '\n';
    for (const auto& [k, v] : c.meta) out << "meta " << k << ' ' << v << '\n';
    out << "shape " << c.rows << ' ' << c.cols << '\n';
    for (const auto& [re, im] : c.values) out << re << ' ' << im << '\n';
    std::string body = out.str();
    body += "checksum " + crc_hex(body) + "\n";
    return body;
}

Container parse_container(const std::string& text, bool require_checksum) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw FormatError("not a container (bad header)");
    Container c;
    bool have_shape = false;
    std::size_t consumed = line.size() + 1;
    std::optional<std::string> checksum;
    std::size_t checksum_offset = 0;
    while (std::getline(in, line)) {
        const std::size_t start = consumed;
        consumed += line.size() + 1;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "checksum") {
            std::string v;
            ls >> v;
            checksum = v;
            checksum_offset = start;
            break;
        }
        if (!have_shape) {
            if (tag == "kind") {
                ls >> c.kind;
            } else if (tag == "meta") {
                std::string key, rest;
                ls >> key;
                std::getline(ls >> std::ws, rest);
                c.meta[key] = rest;
            } else if (tag == "shape") {
                std::string r, k;
                ls >> r >> k;
                c.rows = static_cast<std::size_t>(parse_int(r, "rows"));
                c.cols = static_cast<std::size_t>(parse_int(k, "cols"));
                have_shape = true;
            } else {
                throw FormatError("unexpected line: " + line);
            }
            continue;
        }
        std::string im, extra;
        ls >> im;
        if (im.empty() || (ls >> extra)) throw FormatError("bad value line: " + line);
        c.values.emplace_back(tag, im);
    }
    if (!have_shape) throw FormatError("container has no shape line");
    if (c.values.size() != c.rows * c.cols) throw FormatError("container holds the wrong number of values");
    if (checksum) {
        if (crc_hex(text.substr(0, checksum_offset)) != *checksum) throw FormatError("checksum mismatch");
    } else if (require_checksum) {
        throw FormatError("container has no checksum");
    }
    return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
    const std::string text = serialize(c);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    FileLock lock(path, LOCK_EX);
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp);
        out << text;
        out.flush();
        if (!out) throw FormatError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<Container> read_container(const std::filesystem::path& path, bool require_checksum) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::string text;
    {
        const bool lockable = !path.has_parent_path() || ::access(path.parent_path().c_str(), W_OK) == 0;
        std::optional<FileLock> lock;
        if (lockable) lock.emplace(path, LOCK_SH);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw FormatError("cannot read " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_container(text, require_checksum);
}

Container to_container(const MomentMatrix& M) {
    Container c = dense_container("moments", M.entries());
    c.meta["digits"] = std::to_string(M.digits());
    c.meta["domain"] = M.domain_tag();
    c.meta["n_max"] = std::to_string(M.n_max());
    std::string hist;
    for (const auto& h : M.history()) {
        if (!hist.empty()) hist += ',';
        hist += std::to_string(h.nodes_per_arc) + ':' + format_log10(h.log10_change);
    }
    c.meta["quadrature"] = hist;
    return c;
}

MomentMatrix moments_from_container(const Container& c) {
    expect_kind(c, "moments");
    const int digits = parse_int(c.get("digits"), "digits");
    if (c.rows != c.cols || c.rows == 0) throw FormatError("moment table must be square");
    std::vector<QuadratureStep> history;
    std::istringstream hs(c.get("quadrature"));
    std::string item;
    while (std::getline(hs, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw FormatError("bad quadrature history entry: " + item);
        const std::string v = item.substr(colon + 1);
        double val = 0;
        if (v == "inf") {
            val = std::numeric_limits<double>::infinity();
        } else if (v == "-inf") {
            val = -std::numeric_limits<double>::infinity();
        } else {
            try {
                val = std::stod(v);
            } catch (const std::exception&) {
                throw FormatError("bad quadrature history entry: " + item);
            }
        }
        history.push_back({parse_int(item.substr(0, colon), "nodes"), val});
    }
    ScopedPrecision guard(digits);
    return MomentMatrix(dense_from(c), c.get("domain"), digits, std::move(history));
}

Container to_container(const LaurentSeries& s) {
    Container c;
    c.kind = "laurent";
    c.meta["digits"] = std::to_string(s.digits());
    c.rows = static_cast<std::size_t>(s.truncation()) + 2;
    c.cols = 1;
    c.values.emplace_back(to_decimal(s.psi1()), "0");
    c.values.emplace_back(to_decimal(s.psi0().real()), to_decimal(s.psi0().imag()));
    for (const auto& v : s.negative()) c.values.emplace_back(to_decimal(v.real()), to_decimal(v.imag()));
    return c;
}

LaurentSeries series_from_container(const Container& c) {
    expect_kind(c, "laurent");
    const int digits = parse_int(c.get("digits"), "digits");
    if (c.cols != 1 || c.rows < 2) throw FormatError("laurent container needs psi_1, psi_0 and a column layout");
    ScopedPrecision guard(digits);
    const Complex psi1 = value_at(c, 0, 0);
    if (!psi1.imag().is_zero()) throw FormatError("psi_1 must be real");
    std::vector<Complex> neg;
    for (std::size_t i = 2; i < c.rows; ++i) neg.push_back(value_at(c, i, 0));
    try {
        return LaurentSeries(psi1.real(), value_at(c, 1, 0), std::move(neg), digits);
    } catch (const UsageError& e) {
        throw FormatError(e.what());
    }
}

Container to_container(const BergmanBasis& b, const std::string& domain_tag) {
    Container c = dense_container("bergman-basis", b.coeffs());
    c.meta["digits"] = std::to_string(b.digits());
    c.meta["domain"] = domain_tag;
    return c;
}

BergmanBasis basis_from_container(const Container& c) {
    expect_kind(c, "bergman-basis");
    const int digits = parse_int(c.get("digits"), "digits");
    ScopedPrecision guard(digits);
    return BergmanBasis(dense_from(c), digits);
}

Container to_container(const HessenbergMatrix& H, const std::string& domain_tag, int digits) {
    Container c = dense_container("hessenberg", H.entries());
    c.meta["digits"] = std::to_string(digits);
    c.meta["domain"] = domain_tag;
    return c;
}

HessenbergMatrix hessenberg_from_container(const Container& c) {
    expect_kind(c, "hessenberg");
    ScopedPrecision guard(parse_int(c.get("digits"), "digits"));
    return HessenbergMatrix(dense_from(c));
}

std::string cache_tag(const std::string& domain_tag) {
    std::string out;
    for (char ch : domain_tag) out.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' ? ch : '-');
    return out;
}

MomentMatrix cached_moments(const DomainSpec& domain, int n_max, int digits, const QuadratureConfig& q,
                            const std::filesystem::path& dir, bool* reused, std::ostream* warn) {
    const auto path = dir / ("moments_" + cache_tag(domain.tag()) + "_n" + std::to_string(n_max) + "_d" +
                             std::to_string(digits) + ".txt");
    if (reused) *reused = false;
    if (!dir.empty()) {
        try {
            if (auto c = read_container(path)) {
                auto M = moments_from_container(*c);
                if (M.domain_tag() == domain.tag() && M.n_max() == n_max && M.digits() == digits) {
                    if (reused) *reused = true;
                    return M;
                }
                if (warn) *warn << "warning: cache entry " << path << " does not match the request; recomputing\n";
            }
        } catch (const FormatError& e) {
            if (warn) *warn << "warning: discarding cache entry " << path << ": " << e.what() << "; recomputing\n";
        }
    }
    auto M = moments_contour(domain, n_max, digits, q);
    if (!dir.empty()) write_container(path, to_container(M));
    return M;
}

}  // namespace bergman
