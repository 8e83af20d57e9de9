#include "decoh/harness/io.hpp"

#include "decoh/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace decoh::harness {

namespace {

constexpr char kMagic[8] = {'D', 'E', 'C', 'O', 'H', 'F', 'L', 'D'};

template <class T>
void put(std::string& buf, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    buf.append(b.data(), b.size());
}

template <class T>
T take(const std::string& buf, std::size_t& pos, const std::string& path) {
    if (pos + sizeof(T) > buf.size()) throw IoError("truncated field dump '" + path + "'");
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), buf.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_dump(const std::string& path, const std::vector<Grid1D>& axes, const std::vector<cplx>& values,
                const nlohmann::json& meta) {
    std::string buf(kMagic, sizeof(kMagic));
    const std::string m = meta.dump();
    put<std::uint32_t>(buf, kDumpVersion);
    put<std::uint32_t>(buf, 0x01020304u);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(axes.size()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(m.size()));
    buf += m;
    for (const auto& g : axes) {
        put<std::uint64_t>(buf, g.n);
        put<double>(buf, g.min);
        put<double>(buf, g.spacing);
    }
    buf.reserve(buf.size() + values.size() * 16);
    for (const auto& v : values) {
        put<double>(buf, v.real());
        put<double>(buf, v.imag());
    }
    write_bytes(path, buf);
}

}  // namespace

void write_field(const std::string& path, const ComplexField2D& f, const nlohmann::json& meta) {
    write_dump(path, {f.grid_r, f.grid_R}, f.values, meta);
}

void write_field(const std::string& path, const ComplexField1D& f, const nlohmann::json& meta) {
    write_dump(path, {f.grid}, f.values, meta);
}

void write_field(const std::string& path, const DensityMatrixGrid& rho, const nlohmann::json& meta) {
    const std::size_t n = rho.grid.n;
    std::vector<cplx> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = rho.kernel(i, j);
    write_dump(path, {rho.grid, rho.grid}, v, meta);
}

FieldDump read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string buf = ss.str();
    if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 8) != 0) throw IoError("'" + path + "' is not a field dump");
    std::size_t pos = 8;
    const auto version = take<std::uint32_t>(buf, pos, path);
    if (version != kDumpVersion) throw IoError("unsupported field dump version " + std::to_string(version));
    if (take<std::uint32_t>(buf, pos, path) != 0x01020304u) throw IoError("bad endianness tag in '" + path + "'");
    const auto rank = take<std::uint32_t>(buf, pos, path);
    const auto mlen = take<std::uint32_t>(buf, pos, path);
    if (pos + mlen > buf.size()) throw IoError("truncated field dump '" + path + "'");
    FieldDump d;
    d.meta = nlohmann::json::parse(buf.substr(pos, mlen));
    pos += mlen;
    std::size_t count = 1;
    for (std::uint32_t a = 0; a < rank; ++a) {
        Grid1D g;
        g.n = take<std::uint64_t>(buf, pos, path);
        g.min = take<double>(buf, pos, path);
        g.spacing = take<double>(buf, pos, path);
        count *= g.n;
        d.axes.push_back(g);
    }
    if (buf.size() - pos != count * 16) throw IoError("field dump '" + path + "' has the wrong payload size");
    d.values.resize(count);
    for (auto& v : d.values) {
        const double re = take<double>(buf, pos, path);
        const double im = take<double>(buf, pos, path);
        v = {re, im};
    }
    return d;
}

std::string format_double(double v) {
    std::array<char, 32> b;
    auto res = std::to_chars(b.data(), b.data() + b.size(), v);
    return std::string(b.data(), res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ValidationError("csv header and column count differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ValidationError("csv columns differ in length");
    std::string s;
    for (std::size_t k = 0; k < header.size(); ++k) s += (k ? "," : "") + header[k];
    s += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k) s += ',';
            s += format_double(columns[k][i]);
        }
        s += '\n';
    }
    write_text(path, s);
}

void write_density_csv(const std::string& path, const DensityMatrixGrid& rho) {
    const std::size_t n = rho.grid.n;
    std::vector<std::vector<double>> cols(4);
    for (auto& c : cols) c.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cols[0].push_back(rho.grid.x(i));
            cols[1].push_back(rho.grid.x(j));
            cols[2].push_back(rho.kernel(i, j).real());
            cols[3].push_back(rho.kernel(i, j).imag());
        }
    const bool mom = rho.representation == Representation::momentum;
    write_csv(path, mom ? std::vector<std::string>{"k", "k_prime", "re", "im"} : std::vector<std::string>{"R", "R_prime", "re", "im"},
              cols);
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::string& path, const std::string& text) { write_bytes(path, text); }

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

}  // namespace decoh::harness
