#include "majda/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace majda {

namespace fs = std::filesystem;

namespace {

template <class T>
T to_little(T v)
{
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    } else {
        return v;
    }
}

class Writer {
public:
    explicit Writer(std::ofstream& out) : out_(out) {}

    template <class T>
    void put(T v)
    {
        const T le = to_little(v);
        out_.write(reinterpret_cast<const char*>(&le), sizeof(T));
    }

    void put_doubles(const double* p, std::size_t n)
    {
        if constexpr (std::endian::native == std::endian::little) {
            out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                put(p[i]);
            }
        }
    }

private:
    std::ofstream& out_;
};

class Reader {
public:
    Reader(const fs::path& path, std::ifstream& in) : path_(path), in_(in) {}

    template <class T>
    T get(const char* what)
    {
        T v;
        read(reinterpret_cast<char*>(&v), sizeof(T), what);
        return to_little(v);
    }

    void get_doubles(double* p, std::size_t n, const char* what)
    {
        read(reinterpret_cast<char*>(p), n * sizeof(double), what);
        if constexpr (std::endian::native == std::endian::big) {
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = to_little(p[i]);
            }
        }
    }

    void read(char* dst, std::size_t n, const char* what)
    {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw SnapshotFormatError(path_, offset_ + static_cast<std::size_t>(in_.gcount()),
                                      std::string("truncated while reading ") + what);
        }
        offset_ += n;
    }

    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
    std::size_t offset() const { return offset_; }
    [[noreturn]] void fail(const std::string& what) const { throw SnapshotFormatError(path_, offset_, what); }

private:
    const fs::path& path_;
    std::ifstream& in_;
    std::size_t offset_ = 0;
};

}  // namespace

SnapshotFormatError::SnapshotFormatError(const fs::path& path, std::size_t offset, const std::string& what)
    : std::runtime_error(path.string() + ": byte " + std::to_string(offset) + ": " + what), offset_(offset)
{
}

void write_snapshot(const fs::path& path, const LayeredGrid& grid, const LayeredState& state,
                    const AdvectionHistory* history)
{
    grid.validate();
    if (state.omega.size() != grid.size() || state.u_mean.size() != grid.n_layers()) {
        throw std::invalid_argument("snapshot: state does not match the grid");
    }
    const bool with_history = history != nullptr && history->valid;
    const std::size_t n_hist = grid.n_layers() * static_cast<std::size_t>(grid.n2) * (grid.n1 / 2 + 1);
    if (with_history && history->n_prev.size() != n_hist) {
        throw std::invalid_argument("snapshot: advection history does not match the grid");
    }

    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write snapshot '" + tmp.string() + "'");
        }
        Writer w(out);
        out.write(kSnapshotMagic, 8);
        w.put(kSnapshotVersion);
        w.put(static_cast<std::uint32_t>(grid.n1));
        w.put(static_cast<std::uint32_t>(grid.n2));
        w.put(static_cast<std::uint32_t>(grid.n3));
        w.put(state.t);
        w.put_doubles(state.omega.data(), state.omega.size());
        std::vector<double> mean;
        for (const auto& v : state.u_mean) {
            mean.insert(mean.end(), v.begin(), v.end());
        }
        w.put_doubles(mean.data(), mean.size());
        if (with_history) {
            w.put(std::uint8_t{1});
            w.put(history->dt_prev);
            w.put_doubles(reinterpret_cast<const double*>(history->n_prev.data()), 2 * n_hist);
        }
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for snapshot '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

Snapshot read_snapshot(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open snapshot '" + path.string() + "'");
    }
    Reader r(path, in);
    char magic[8];
    r.read(magic, 8, "magic");
    if (std::memcmp(magic, kSnapshotMagic, 8) != 0) {
        throw SnapshotFormatError(path, 0, "not a snapshot (bad magic)");
    }
    const auto version = r.get<std::uint32_t>("version");
    if (version != kSnapshotVersion) {
        throw SnapshotFormatError(path, 8, "unsupported snapshot version " + std::to_string(version));
    }
    Snapshot snap;
    snap.grid.n1 = static_cast<int>(r.get<std::uint32_t>("n1"));
    snap.grid.n2 = static_cast<int>(r.get<std::uint32_t>("n2"));
    snap.grid.n3 = static_cast<int>(r.get<std::uint32_t>("n3"));
    try {
        snap.grid.validate();
    } catch (const std::invalid_argument& e) {
        throw SnapshotFormatError(path, 12, std::string("invalid grid: ") + e.what());
    }
    snap.state = LayeredState::zeros(snap.grid);
    snap.state.t = r.get<double>("time");
    r.get_doubles(snap.state.omega.data(), snap.state.omega.size(), "omega");
    std::vector<double> mean(2 * snap.state.u_mean.size());
    r.get_doubles(mean.data(), mean.size(), "u_mean");
    for (std::size_t k = 0; k < snap.state.u_mean.size(); ++k) {
        snap.state.u_mean[k] = {mean[2 * k], mean[2 * k + 1]};
    }
    if (r.at_end()) {
        return snap;
    }
    const auto flag = r.get<std::uint8_t>("trailer flag");
    if (flag != 1) {
        throw SnapshotFormatError(path, r.offset() - 1, "unexpected trailer flag " + std::to_string(flag));
    }
    snap.history.valid = true;
    snap.history.dt_prev = r.get<double>("dt_prev");
    const std::size_t n_hist =
        snap.grid.n_layers() * static_cast<std::size_t>(snap.grid.n2) * (snap.grid.n1 / 2 + 1);
    snap.history.n_prev.resize(n_hist);
    r.get_doubles(reinterpret_cast<double*>(snap.history.n_prev.data()), 2 * n_hist, "advection history");
    if (!r.at_end()) {
        r.fail("trailing bytes after the advection history");
    }
    return snap;
}

std::string snapshot_file_name(long step)
{
    std::ostringstream os;
    os << "snapshot_" << std::setw(6) << std::setfill('0') << step << ".bin";
    return os.str();
}

std::vector<fs::path> list_snapshots(const fs::path& dir)
{
    std::vector<std::pair<long, fs::path>> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snapshot_", 0) != 0 || entry.path().extension() != ".bin") {
            continue;
        }
        const std::string digits = name.substr(9, name.size() - 9 - 4);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            continue;
        }
        found.emplace_back(std::stol(digits), entry.path());
    }
    std::sort(found.begin(), found.end());
    std::vector<fs::path> out;
    for (auto& f : found) {
        out.push_back(std::move(f.second));
    }
    return out;
}

}  // namespace majda
