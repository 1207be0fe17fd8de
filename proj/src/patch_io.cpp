#include "igahmm/patch_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "igahmm/errors.hpp"

namespace igahmm {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank, comment-stripped line; false at end of input.
    bool next(std::string& text) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++number_;
            if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
            text = raw;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "patch file line " << number_ << ": " << what;
        throw IoError(os.str());
    }

    std::istringstream expect(const std::string& keyword) {
        std::string text;
        if (!next(text)) fail("unexpected end of file, expected '" + keyword + "'");
        std::istringstream ss(text);
        std::string kw;
        ss >> kw;
        if (kw != keyword) fail("expected '" + keyword + "', found '" + kw + "'");
        return ss;
    }

    template <typename T>
    std::vector<T> read_all(std::istringstream& ss, const char* what) {
        std::vector<T> out;
        T v;
        while (ss >> v) out.push_back(v);
        if (!ss.eof()) fail(std::string("malformed number in ") + what);
        return out;
    }

    int number() const { return number_; }

private:
    std::istream& in_;
    int number_ = 0;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

NurbsPatch read_patch(std::istream& in) {
    LineReader r(in);

    auto header = r.expect("nurbs_patch");
    int version = 0;
    if (!(header >> version) || version != 1) r.fail("unsupported patch format version");

    auto deg = r.expect("degrees");
    auto degrees = r.read_all<int>(deg, "degrees");
    if (degrees.size() != 2) r.fail("'degrees' needs two integers");

    auto ku_line = r.expect("knots_u");
    auto ku = r.read_all<double>(ku_line, "knots_u");
    const int ku_line_no = r.number();
    auto kv_line = r.expect("knots_v");
    auto kv = r.read_all<double>(kv_line, "knots_v");
    const int kv_line_no = r.number();

    auto cp = r.expect("control_points");
    auto counts = r.read_all<int>(cp, "control_points");
    if (counts.size() != 2 || counts[0] < 1 || counts[1] < 1) r.fail("'control_points' needs two positive counts");

    ControlNet net;
    net.count_u = counts[0];
    net.count_v = counts[1];
    net.points.resize(net.size(), 2);
    net.weights.resize(net.size());
    for (int k = 0; k < net.size(); ++k) {
        std::string text;
        if (!r.next(text)) r.fail("unexpected end of file inside control point list");
        std::istringstream ss(text);
        auto xyw = r.read_all<double>(ss, "control point");
        if (xyw.size() != 3) r.fail("control point needs 'x y w'");
        net.points(k, 0) = xyw[0];
        net.points(k, 1) = xyw[1];
        net.weights[k] = xyw[2];
    }
    std::string extra;
    if (r.next(extra)) r.fail("trailing content after control points");

    auto knot_vector = [](std::vector<double> knots, int degree, int line) {
        try {
            return KnotVector(std::move(knots), degree);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "patch file line " << line << ": " << e.what();
            throw IoError(os.str());
        }
    };
    KnotVector u = knot_vector(std::move(ku), degrees[0], ku_line_no);
    KnotVector v = knot_vector(std::move(kv), degrees[1], kv_line_no);
    try {
        return NurbsPatch(std::move(u), std::move(v), std::move(net));
    } catch (const Error& e) {
        throw IoError(std::string("patch file: ") + e.what());
    }
}

NurbsPatch read_patch_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open patch file '" + path + "'");
    return read_patch(in);
}

void write_patch(std::ostream& out, const NurbsPatch& patch) {
    out << "nurbs_patch 1\n";
    out << "degrees " << patch.degree_u() << ' ' << patch.degree_v() << '\n';
    for (int d = 0; d < 2; ++d) {
        out << (d == 0 ? "knots_u" : "knots_v");
        for (double k : patch.knots(d).knots()) out << ' ' << format_double(k);
        out << '\n';
    }
    out << "control_points " << patch.count_u() << ' ' << patch.count_v() << '\n';
    const ControlNet& net = patch.net();
    for (int k = 0; k < net.size(); ++k) {
        out << format_double(net.points(k, 0)) << ' ' << format_double(net.points(k, 1)) << ' '
            << format_double(net.weights[k]) << '\n';
    }
}

void write_patch_file(const std::string& path, const NurbsPatch& patch) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write patch file '" + path + "'");
    write_patch(out, patch);
    if (!out) throw IoError("error writing patch file '" + path + "'");
}

}  // namespace igahmm
