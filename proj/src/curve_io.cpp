#include "orderest/curve_io.hpp"

#include "orderest/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace orderest {

std::string format_g12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_curve_csv(const RiskCurve& curve, std::ostream& out)
{
    out << kCurveCsvHeader << '\n';
    for (std::size_t e = 0; e < curve.labels.size(); ++e)
        for (std::size_t g = 0; g < curve.lambda_grid.size(); ++g) {
            const RiskEstimate& r = curve.risks[e][g];
            out << curve.model_id << ',' << to_string(curve.target) << ',' << curve.loss << ',' << curve.labels[e]
                << ',' << format_g12(curve.lambda_grid[g]) << ',' << format_g12(r.mean_risk) << ','
                << format_g12(r.std_error) << ',' << r.n << ',' << r.seed << '\n';
        }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep))
        out.push_back(cell);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line)
{
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    return v;
}

template <class T>
T parse_unsigned(const std::string& s, std::size_t line)
{
    T v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("line " + std::to_string(line) + ": '" + s + "' is not a nonnegative integer");
    return v;
}

}  // namespace

RiskCurve read_curve_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCurveCsvHeader)
        throw DataError("risk curve CSV must start with the header '" + std::string(kCurveCsvHeader) + "'");

    RiskCurve curve;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto cells = split(line, ',');
        if (cells.size() != 9)
            throw DataError("line " + std::to_string(lineno) + ": expected 9 columns");
        if (curve.labels.empty()) {
            curve.model_id = cells[0];
            curve.target = target_from_name(cells[1]);
            curve.loss = cells[2];
        }
        else if (cells[0] != curve.model_id || cells[2] != curve.loss) {
            throw DataError("line " + std::to_string(lineno) + ": mixed models or losses in one curve");
        }
        const double lambda = parse_double(cells[4], lineno);
        auto label = std::find(curve.labels.begin(), curve.labels.end(), cells[3]);
        std::size_t e = label - curve.labels.begin();
        if (label == curve.labels.end()) {
            curve.labels.push_back(cells[3]);
            curve.risks.emplace_back();
        }
        if (e == 0)
            curve.lambda_grid.push_back(lambda);
        const std::size_t g = curve.risks[e].size();
        if (g >= curve.lambda_grid.size() || curve.lambda_grid[g] != lambda)
            throw DataError("line " + std::to_string(lineno) + ": estimators must share one lambda grid");
        RiskEstimate r;
        r.mean_risk = parse_double(cells[5], lineno);
        r.std_error = parse_double(cells[6], lineno);
        r.n = parse_unsigned<std::size_t>(cells[7], lineno);
        r.seed = parse_unsigned<std::uint64_t>(cells[8], lineno);
        curve.risks[e].push_back(r);
        curve.n = r.n;
    }
    for (const auto& row : curve.risks)
        if (row.size() != curve.lambda_grid.size())
            throw DataError("risk curve CSV has estimators with different grid lengths");
    const std::string name = curve.model_id.substr(0, curve.model_id.find('['));
    bool scale = false;
    try {
        scale = model_mode(model_name_from_string(name)) == Mode::scale;
    }
    catch (const ConfigError&) {
        scale = !curve.lambda_grid.empty() && curve.lambda_grid.front() >= 1.0;
    }
    curve.mode = scale ? Mode::scale : Mode::location;
    curve.base_theta1 = scale ? 1.0 : 0.0;
    return curve;
}

void write_curve_svg(const RiskCurve& curve, const std::string& title, std::ostream& out)
{
    constexpr double width = 640, height = 420, left = 70, right = 160, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;

    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (double x : curve.lambda_grid) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& row : curve.risks)
        for (const auto& r : row) {
            ymin = std::min(ymin, r.mean_risk);
            ymax = std::max(ymax, r.mean_risk);
        }
    if (!(xmax > xmin))
        xmax = xmin + 1.0;
    if (!(ymax > ymin)) {
        ymin -= 0.5 * std::max(1e-12, std::abs(ymin));
        ymax += 0.5 * std::max(1e-12, std::abs(ymax));
    }
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"22\" font-size=\"13\">" << title << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double x = xmin + (xmax - xmin) * k / 5.0;
        const double y = ymin + (ymax - ymin) * k / 5.0;
        out << "<line x1=\"" << px(x) << "\" y1=\"" << top + ph << "\" x2=\"" << px(x) << "\" y2=\"" << top + ph + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
            << format_g12(std::round(x * 1000) / 1000) << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << left << "\" y2=\"" << py(y)
            << "\" stroke=\"black\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", y);
        out << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << (curve.mode == Mode::location ? "theta2 - theta1" : "theta2 / theta1") << "</text>\n";
    for (std::size_t e = 0; e < curve.labels.size(); ++e) {
        const char* color = colors[e % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t g = 0; g < curve.lambda_grid.size(); ++g)
            out << (g ? " " : "") << px(curve.lambda_grid[g]) << ',' << py(curve.risks[e][g].mean_risk);
        out << "\"/>\n";
        const double ly = top + 15.0 * (e + 1);
        out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << curve.labels[e] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace orderest
