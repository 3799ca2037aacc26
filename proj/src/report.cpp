// SPDX-License-Identifier: Apache-2.0
//
// pdpkit - power-delay-profile design and OFDM channel estimation workbench
// Copyright (C) 2026 The pdpkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "pdpkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pdpkit
{
namespace
{
std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Fields may contain commas (e.g. channel selectors); quote those.
std::string field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + '"';
}

std::vector<std::string> split_row(const std::string &line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted)
        {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                out.back() += '"', ++i;
            else if (c == '"')
                quoted = false;
            else
                out.back() += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
            out.emplace_back();
        else
            out.back() += c;
    }
    return out;
}

double parse_double(const std::string &s, std::size_t line)
{
    try
    {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size())
            return v;
    }
    catch (const std::exception &)
    {
    }
    throw std::runtime_error("CSV line " + std::to_string(line) + ": bad number '" + s + "'");
}

std::string xml_escape(const std::string &s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
} // namespace

void write_csv(std::ostream &os, std::span<const EvalPoint> table)
{
    if (table.empty())
        throw std::invalid_argument("write_csv: empty table.");
    os << csv_header << '\n';
    for (const auto &p : table)
    {
        os << field(p.estimator) << ',' << field(p.channel) << ',' << num(p.snr_db) << ','
           << (p.ds_ns ? num(*p.ds_ns) : std::string()) << ',' << p.n << ',' << num(p.mse) << ','
           << num(p.stderr_mse) << '\n';
    }
}

void write_csv(const std::string &path, std::span<const EvalPoint> table)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("Cannot open " + path + " for writing.");
    write_csv(f, table);
    f.flush();
    if (!f)
        throw std::runtime_error("Write failed: " + path);
}

std::vector<EvalPoint> read_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw std::runtime_error("CSV header mismatch, expected '" + std::string(csv_header) + "'");

    std::vector<EvalPoint> table;
    std::size_t lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split_row(line);
        if (f.size() != 7)
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 7 fields.");
        EvalPoint p;
        p.estimator = f[0];
        p.channel = f[1];
        p.snr_db = parse_double(f[2], lineno);
        if (!f[3].empty())
            p.ds_ns = parse_double(f[3], lineno);
        p.n = static_cast<std::size_t>(parse_double(f[4], lineno));
        p.mse = parse_double(f[5], lineno);
        p.stderr_mse = parse_double(f[6], lineno);
        table.push_back(std::move(p));
    }
    return table;
}

std::vector<EvalPoint> read_csv_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("Cannot open " + path);
    return read_csv(f);
}

void write_svg(std::ostream &os, std::span<const EvalPoint> table, const std::string &title)
{
    if (table.empty())
        throw std::invalid_argument("write_svg: empty table.");

    const bool by_ds = std::all_of(table.begin(), table.end(), [](const EvalPoint &p) { return p.ds_ns.has_value(); });
    auto xval = [&](const EvalPoint &p) { return by_ds ? std::log10(std::max(*p.ds_ns, 1e-300)) : p.snr_db; };

    // channel -> estimator -> points, in first-seen order
    std::vector<std::string> channels;
    std::map<std::string, std::vector<std::string>> estimators;
    std::map<std::pair<std::string, std::string>, std::vector<const EvalPoint *>> series;
    for (const auto &p : table)
    {
        if (std::find(channels.begin(), channels.end(), p.channel) == channels.end())
            channels.push_back(p.channel);
        auto &e = estimators[p.channel];
        if (std::find(e.begin(), e.end(), p.estimator) == e.end())
            e.push_back(p.estimator);
        series[{p.channel, p.estimator}].push_back(&p);
    }

    const double pw = 420, ph = 300, ml = 60, mr = 20, mt = 40, mb = 45;
    const double panel_w = ml + pw + mr, panel_h = mt + ph + mb;
    const std::size_t ncols = std::min<std::size_t>(channels.size(), 3);
    const std::size_t nrows = (channels.size() + ncols - 1) / ncols;

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(panel_w * ncols) << "\" height=\""
       << num(panel_h * nrows + 30) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
       << "<text x=\"10\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

    for (std::size_t c = 0; c < channels.size(); ++c)
    {
        const auto &ch = channels[c];
        const double ox = panel_w * (c % ncols), oy = 30 + panel_h * (c / ncols);

        double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
        for (const auto &p : table)
        {
            if (p.channel != ch)
                continue;
            xmin = std::min(xmin, xval(p));
            xmax = std::max(xmax, xval(p));
            if (p.mse > 0.0)
            {
                ymin = std::min(ymin, std::log10(p.mse));
                ymax = std::max(ymax, std::log10(p.mse));
            }
        }
        if (!std::isfinite(ymin))
            ymin = -1, ymax = 0;
        ymin = std::floor(ymin);
        ymax = std::ceil(ymax);
        if (ymax <= ymin)
            ymax = ymin + 1;
        if (xmax <= xmin)
            xmin -= 0.5, xmax += 0.5;

        auto sx = [&](double x) { return ox + ml + (x - xmin) / (xmax - xmin) * pw; };
        auto sy = [&](double mse) {
            const double ly = mse > 0.0 ? std::log10(mse) : ymin;
            return oy + mt + (ymax - ly) / (ymax - ymin) * ph;
        };

        os << "<g>\n<text x=\"" << num(ox + ml) << "\" y=\"" << num(oy + mt - 10) << "\">" << xml_escape(ch)
           << "</text>\n"
           << "<rect x=\"" << num(ox + ml) << "\" y=\"" << num(oy + mt) << "\" width=\"" << num(pw)
           << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

        for (double d = ymin; d <= ymax + 1e-9; d += 1.0)
        {
            const double y = sy(std::pow(10.0, d));
            os << "<line x1=\"" << num(ox + ml) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ox + ml + pw)
               << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n"
               << "<text x=\"" << num(ox + ml - 5) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e"
               << num(d) << "</text>\n";
        }
        for (int t = 0; t <= 4; ++t)
        {
            const double x = xmin + (xmax - xmin) * t / 4.0;
            const double label = by_ds ? std::pow(10.0, x) : x;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", label);
            os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(oy + mt + ph + 15) << "\" text-anchor=\"middle\">"
               << buf << "</text>\n";
        }
        os << "<text x=\"" << num(ox + ml + pw / 2) << "\" y=\"" << num(oy + mt + ph + 32)
           << "\" text-anchor=\"middle\">" << (by_ds ? "delay spread [ns]" : "SNR [dB]") << "</text>\n";

        const auto &ests = estimators[ch];
        for (std::size_t e = 0; e < ests.size(); ++e)
        {
            auto pts = series[{ch, ests[e]}];
            std::stable_sort(pts.begin(), pts.end(),
                             [&](const EvalPoint *a, const EvalPoint *b) { return xval(*a) < xval(*b); });
            const char *colour = palette[e % std::size(palette)];
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i)
                os << (i ? " " : "") << num(sx(xval(*pts[i]))) << ',' << num(sy(pts[i]->mse));
            os << "\"/>\n";
            os << "<text x=\"" << num(ox + ml + pw - 5) << "\" y=\"" << num(oy + mt + 15 + 14 * e)
               << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << xml_escape(ests[e]) << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

void write_svg(const std::string &path, std::span<const EvalPoint> table, const std::string &title)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("Cannot open " + path + " for writing.");
    write_svg(f, table, title);
    f.flush();
    if (!f)
        throw std::runtime_error("Write failed: " + path);
}
} // namespace pdpkit
