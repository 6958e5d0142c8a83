#include "conespec/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "conespec/config.hpp"
#include "conespec/error.hpp"

namespace conespec {

std::string with_provenance(const std::string& csv, const std::string& digest_hex, const std::string& tag) {
    return "# config_digest=" + digest_hex + " run=" + tag + "\n" + csv;
}

Manifest::Manifest(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_ + "': " + ec.message());
}

std::string Manifest::write(const std::string& name, const std::string& content) {
    const std::string path = dir_ + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << content;
    std::string d = hex64(fnv1a64(content));
    entries_.push_back({name, d});
    return d;
}

void Manifest::finish(const std::string& subcommand, const std::string& config_digest, bool complete,
                      const std::string& note) const {
    std::ostringstream os;
    for (const auto& [name, d] : entries_) os << d << "  " << name << "\n";
    os << "# subcommand=" << subcommand << "\n";
    os << "# config_digest=" << config_digest << "\n";
    os << "# complete=" << (complete ? "true" : "false") << "\n";
    if (!note.empty()) os << "# note=" << note << "\n";
    std::ofstream f(dir_ + "/MANIFEST", std::ios::binary);
    f << os.str();
}

std::string svg_loglog(const std::string& title, const std::vector<SvgSeries>& series) {
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double ay = std::abs(s.y[i]);
            if (!(s.x[i] > 0) || !(ay > 0)) continue;
            x0 = std::min(x0, std::log10(s.x[i])), x1 = std::max(x1, std::log10(s.x[i]));
            y0 = std::min(y0, std::log10(ay)), y1 = std::max(y1, std::log10(ay));
        }
    if (!(x1 > x0)) x0 -= 1, x1 += 1;
    if (!(y1 > y0)) y0 -= 1, y1 += 1;
    auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (std::log10(std::abs(y)) - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" font-family=\"sans-serif\" "
                  "font-size=\"12\">\n",
                  W, H);
    os << buf;
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#000\"/>\n", L,
                  T, W - L - R, H - T - B);
    os << buf << "<text x=\"" << L << "\" y=\"24\">" << title << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\">1e%.2g</text><text x=\"%g\" y=\"%g\" text-anchor=\"end\">1e%.2g</text>\n", L,
                  H - B + 18, x0, W - R, H - B + 18, x1);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">1e%.2g</text><text x=\"%g\" y=\"%g\" "
                  "text-anchor=\"end\">1e%.2g</text>\n",
                  L - 4, H - B, y0, L - 4, T + 10, y1);
    os << buf;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = colors[k % 4];
        if (s.line) {
            os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0) || !(std::abs(s.y[i]) > 0)) continue;
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
                os << buf;
            }
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0) || !(std::abs(s.y[i]) > 0)) continue;
                std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", px(s.x[i]),
                              py(s.y[i]), c);
                os << buf;
            }
        }
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", W - R - 150,
                      T + 18 + 16.0 * k, c, s.label.c_str());
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace conespec
