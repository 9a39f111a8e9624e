#include "anicv/pcr_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace anicv {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const char* what) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        double v;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw IoError(std::string("bad number in ") + what + ": '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::string expect_prefixed_line(std::istream& in, const std::string& prefix) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("unexpected end of PCR file");
    if (line.rfind(prefix, 0) != 0) throw IoError("expected line starting with '" + prefix + "'");
    return line.substr(prefix.size());
}

} // namespace

PcrImage read_pcr(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic)) throw IoError("empty PCR stream");
    if (magic != "PCR1") throw IoError("bad PCR magic line: '" + magic + "'");

    std::vector<double> xs = parse_numbers(expect_prefixed_line(in, "xlines:"), "xlines");
    std::vector<double> ys = parse_numbers(expect_prefixed_line(in, "ylines:"), "ylines");
    std::string after_values = expect_prefixed_line(in, "values:");

    GridPtr grid;
    try {
        grid = make_grid(std::move(xs), std::move(ys));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("invalid PCR grid: ") + e.what());
    }

    std::vector<double> vals = parse_numbers(after_values, "values");
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row = parse_numbers(line, "values");
        vals.insert(vals.end(), row.begin(), row.end());
    }
    if (static_cast<int>(vals.size()) != grid->cell_count())
        throw IoError("value count does not match cell count");

    // File rows run top (largest y) to bottom; storage has row 0 at the bottom.
    std::vector<double> storage(vals.size());
    int nx = grid->nx(), ny = grid->ny();
    for (int r = 0; r < ny; ++r)
        for (int ix = 0; ix < nx; ++ix)
            storage[grid->cell_index(ix, ny - 1 - r)] = vals[r * nx + ix];
    return PcrImage(std::move(grid), std::move(storage));
}

PcrImage read_pcr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open PCR file: " + path);
    return read_pcr(in);
}

void write_pcr(std::ostream& out, const PcrImage& img) {
    const Grid& g = *img.grid();
    out << "PCR1\n";
    out << "xlines:";
    for (double x : g.xlines()) out << ' ' << format_double(x);
    out << "\nylines:";
    for (double y : g.ylines()) out << ' ' << format_double(y);
    out << "\nvalues:\n";
    for (int iy = g.ny() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            if (ix) out << ' ';
            out << format_double(img.value(g.cell_index(ix, iy)));
        }
        out << '\n';
    }
}

void write_pcr_file(const std::string& path, const PcrImage& img) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write PCR file: " + path);
    write_pcr(out, img);
}

} // namespace anicv
