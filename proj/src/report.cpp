// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "kinetic_uq/error.hpp"
#include "report_io.hpp"

namespace kuq::detail {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_float64_le(const std::filesystem::path& path, std::span<const double> values) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
    if (!out) throw Error(ErrorCode::io, "short write to " + path.string());
}

std::vector<double> read_float64_le(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(double) != 0) throw Error(ErrorCode::io, path.string() + " is not a float64 array");
    std::vector<double> values(bytes / sizeof(double));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw Error(ErrorCode::io, "short read from " + path.string());
    return values;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(std::span<const double> values, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_field(std::string_view s) {
    if (!s.empty() && s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string header(std::string_view title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
       << "</text>\n";
    return os.str();
}

}  // namespace

std::string loglog_svg(std::span<const PlotSeries> series, std::string_view title, std::string_view x_label,
                       std::string_view y_label, bool mc_reference) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    std::ostringstream os;
    os << header(title);
    if (!(xmin < xmax) || !(ymin <= ymax)) {
        os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
        return os.str();
    }
    double lx0 = std::floor(std::log10(xmin));
    double lx1 = std::ceil(std::log10(xmax));
    double ly0 = std::floor(std::log10(ymin));
    double ly1 = std::ceil(std::log10(ymax));
    if (lx1 == lx0) lx1 += 1.0;
    if (ly1 == ly0) ly1 += 1.0;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
    auto py = [&](double y) { return kTop + (ly1 - std::log10(y)) / (ly1 - ly0) * ph; };

    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = lx0; e <= lx1; e += 1.0) {
        const double x = kLeft + (e - lx0) / (lx1 - lx0) * pw;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\"" << kTop + ph
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << num(x) << "\" y=\"" << kTop + ph + 16
           << "\" text-anchor=\"middle\">1e" << static_cast<int>(e) << "</text>\n";
    }
    for (double e = ly0; e <= ly1; e += 1.0) {
        const double y = kTop + (ly1 - e) / (ly1 - ly0) * ph;
        os << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << num(y)
           << "\" stroke=\"#ddd\"/>\n<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
       << xml_escape(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kTop + ph / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

    double legend_y = kTop + 10;
    const double legend_x = kLeft + pw + 12;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        os << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y << "\" x2=\"" << legend_x + 20 << "\" y2=\""
           << legend_y << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n<text x=\"" << legend_x + 26
           << "\" y=\"" << legend_y + 4 << "\">" << xml_escape(s.label) << "</text>\n";
        legend_y += 18;
    }
    if (mc_reference && !series.empty()) {
        const auto& s = series.front();
        std::size_t i0 = 0;
        while (i0 < s.x.size() && !(s.x[i0] > 0.0 && s.y[i0] > 0.0)) ++i0;
        if (i0 < s.x.size()) {
            const double x0 = s.x[i0];
            const double y0 = s.y[i0];
            const double x1 = std::pow(10.0, lx1);
            const double y1 = y0 * std::sqrt(x0 / x1);
            os << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(x1))
               << "\" y2=\"" << num(py(y1)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
            os << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y << "\" x2=\"" << legend_x + 20
               << "\" y2=\"" << legend_y << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n<text x=\""
               << legend_x + 26 << "\" y=\"" << legend_y + 4 << "\">n^-1/2</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_svg(std::span<const std::size_t> counts, std::string_view title) {
    std::ostringstream os;
    os << header(title);
    const double pw = kWidth - kLeft - 30.0;
    const double ph = kHeight - kTop - kBottom;
    const std::size_t top = counts.empty() ? 1 : std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end()));
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double bw = counts.empty() ? pw : pw / static_cast<double>(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double h = ph * static_cast<double>(counts[j]) / static_cast<double>(top);
        const double x = kLeft + bw * static_cast<double>(j);
        os << "<rect x=\"" << num(x + 0.1 * bw) << "\" y=\"" << num(kTop + ph - h) << "\" width=\"" << num(0.8 * bw)
           << "\" height=\"" << num(h) << "\" fill=\"#1f77b4\"/>\n";
        os << "<text x=\"" << num(x + 0.5 * bw) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
           << j + 1 << "</text>\n";
    }
    for (std::size_t t = 0; t <= 4; ++t) {
        const double v = static_cast<double>(top) * static_cast<double>(t) / 4.0;
        const double y = kTop + ph - ph * static_cast<double>(t) / 4.0;
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v)
           << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\">dimension j</text>\n</svg>\n";
    return os.str();
}

}  // namespace kuq::detail
