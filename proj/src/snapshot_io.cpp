#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bohm/errors.hpp"
#include "bohm/grid.hpp"

namespace bohm {

namespace {

constexpr char kMagic[8] = {'B', 'O', 'H', 'M', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kEndianTag = 0x01020304u;

template <class T>
void put(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

class Reader {
public:
    explicit Reader(std::ifstream& in) : in_(in) {}

    void set_swap(bool swap) { swap_ = swap; }

    template <class T>
    T get() {
        unsigned char bytes[sizeof(T)];
        in_.read(reinterpret_cast<char*>(bytes), sizeof(T));
        if (!in_) throw InvalidParameter("truncated snapshot file");
        if (swap_) std::reverse(bytes, bytes + sizeof(T));
        T value;
        std::memcpy(&value, bytes, sizeof(T));
        return value;
    }

private:
    std::ifstream& in_;
    bool swap_ = false;
};

}  // namespace

void write_snapshot(const std::filesystem::path& path, const GridState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot open snapshot for writing: " + path.string());
    const GridGeometry& g = state.geometry;
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint32_t>(out, kEndianTag);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dimension));
    put<std::uint32_t>(out, 0);
    put<std::uint64_t>(out, g.points[0]);
    put<std::uint64_t>(out, g.dimension == 2 ? g.points[1] : 1);
    put<double>(out, g.lower[0]);
    put<double>(out, g.upper[0]);
    put<double>(out, g.dimension == 2 ? g.lower[1] : 0.0);
    put<double>(out, g.dimension == 2 ? g.upper[1] : 0.0);
    put<double>(out, state.t);
    put<double>(out, state.units.mass);
    put<double>(out, state.units.hbar);
    put<std::uint32_t>(out, state.boundary == Boundary::dirichlet ? 1u : 0u);
    put<std::uint32_t>(out, 0);
    for (const cplx& z : state.psi) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    if (!out) throw InvalidParameter("failed writing snapshot: " + path.string());
}

GridState read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParameter("cannot open snapshot: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw InvalidParameter("not a snapshot file: " + path.string());

    Reader r(in);
    // Peek the version and tag natively, then decide on byte order.
    std::uint32_t version = r.get<std::uint32_t>();
    const std::uint32_t tag = r.get<std::uint32_t>();
    if (tag == __builtin_bswap32(kEndianTag)) {
        version = __builtin_bswap32(version);
        r.set_swap(true);
    } else if (tag != kEndianTag) {
        throw InvalidParameter("unrecognized endianness tag in snapshot");
    }
    if (version != kFormatVersion) throw InvalidParameter("unsupported snapshot version");

    GridState s;
    GridGeometry& g = s.geometry;
    g.dimension = static_cast<int>(r.get<std::uint32_t>());
    r.get<std::uint32_t>();
    g.points[0] = r.get<std::uint64_t>();
    g.points[1] = r.get<std::uint64_t>();
    g.lower[0] = r.get<double>();
    g.upper[0] = r.get<double>();
    g.lower[1] = r.get<double>();
    g.upper[1] = r.get<double>();
    if (g.dimension == 1) {
        g.lower[1] = 0.0;
        g.upper[1] = 1.0;
    }
    s.t = r.get<double>();
    s.units.mass = r.get<double>();
    s.units.hbar = r.get<double>();
    s.boundary = r.get<std::uint32_t>() == 1u ? Boundary::dirichlet : Boundary::periodic;
    r.get<std::uint32_t>();
    s.psi.resize(g.size());
    for (cplx& z : s.psi) {
        const double re = r.get<double>();
        const double im = r.get<double>();
        z = cplx{re, im};
    }
    return s;
}

}  // namespace bohm
