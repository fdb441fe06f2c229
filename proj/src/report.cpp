#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "voxtdp/inference.hpp"

namespace voxtdp {

namespace {

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string coord_cols(const Coord& c, int dim) {
    std::string out;
    for (int i = 0; i < std::max(dim, 3); ++i) {
        out += '\t';
        if (i < dim) out += std::to_string(c[i]);
    }
    return out;
}

std::string blank_coords(int dim) {
    std::string out;
    for (int i = 0; i < std::max(dim, 3); ++i) out += '\t';
    return out;
}

void region_cells(std::ostringstream& os, const RegionRow& rr) {
    os << rr.name << '\t' << rr.region_size << '\t' << rr.overlap << '\t'
       << (rr.tdp_heur ? fmt3(rat_double(*rr.tdp_heur)) : std::string()) << '\t' << fmt3(rat_double(rr.tdp_lb));
}

nlohmann::json region_json(const RegionRow& rr) {
    nlohmann::json j;
    j["region"] = rr.name;
    j["region_size"] = rr.region_size;
    j["overlap"] = rr.overlap;
    j["tdp_lb"] = rat_double(rr.tdp_lb);
    j["lb_numerator"] = rr.lb_numerator;
    if (rr.tdp_heur) {
        j["tdp"] = rat_double(*rr.tdp_heur);
        j["heur_numerator"] = *rr.heur_numerator;
    } else {
        j["tdp"] = nullptr;
    }
    return j;
}

}  // namespace

std::string format_tdp(const Rat& value) { return fmt3(rat_double(value)); }

std::string render_tsv(const ClusterReport& report) {
    const bool have_ub = std::any_of(report.clusters.begin(), report.clusters.end(),
                                     [](const ClusterRow& c) { return c.tdp_upper.has_value(); });
    std::ostringstream os;
    os << "ID\tsize\tTDP\tLB";
    if (have_ub) os << "\tUB";
    os << "\tRegion\tregion_size\toverlap\tregion_TDP\tregion_LB";
    os << "\tx\ty\tz";
    for (int i = 3; i < report.dim; ++i) os << "\tc" << i;
    os << "\tZ_max\n";

    auto cluster_cells = [&](const ClusterRow& c) {
        std::ostringstream line;
        line << c.id << '\t' << c.size << '\t' << (c.tdp_heur ? fmt3(rat_double(*c.tdp_heur)) : std::string())
             << '\t' << fmt3(rat_double(c.tdp_lb));
        if (have_ub) line << '\t' << (c.tdp_upper ? fmt3(rat_double(*c.tdp_upper)) : std::string());
        return line.str();
    };
    auto blank_cluster = [&]() { return std::string(have_ub ? "\t\t\t\t" : "\t\t\t"); };

    for (const ClusterRow& c : report.clusters) {
        if (c.regions.empty()) {
            os << cluster_cells(c) << "\t\t\t\t\t" << coord_cols(c.peak, report.dim) << '\t' << fmt3(c.z_max)
               << '\n';
            continue;
        }
        for (std::size_t i = 0; i < c.regions.size(); ++i) {
            if (i == 0)
                os << cluster_cells(c) << '\t';
            else
                os << blank_cluster() << '\t';
            region_cells(os, c.regions[i]);
            if (i == 0)
                os << coord_cols(c.peak, report.dim) << '\t' << fmt3(c.z_max);
            else
                os << blank_coords(report.dim) << '\t';
            os << '\n';
        }
    }

    // totals block
    {
        std::ostringstream tot;
        tot << "Total\t" << report.totals.size << '\t'
            << (report.totals.tdp_heur ? fmt3(rat_double(*report.totals.tdp_heur)) : std::string()) << '\t'
            << fmt3(rat_double(report.totals.tdp_lb));
        if (have_ub) tot << '\t';
        if (report.totals.regions.empty()) {
            os << tot.str() << "\t\t\t\t\t" << blank_coords(report.dim) << "\t\n";
        } else {
            for (std::size_t i = 0; i < report.totals.regions.size(); ++i) {
                if (i == 0)
                    os << tot.str() << '\t';
                else
                    os << blank_cluster() << '\t';
                region_cells(os, report.totals.regions[i]);
                os << blank_coords(report.dim) << "\t\n";
            }
        }
    }

    for (const RegionRow& rr : report.queried) {
        os << "Query\t\t\t";
        if (have_ub) os << '\t';
        os << '\t';
        region_cells(os, rr);
        os << blank_coords(report.dim) << "\t\n";
    }
    return os.str();
}

std::string render_json(const ClusterReport& report) {
    nlohmann::json j;
    j["alpha"] = report.alpha;
    switch (report.sidedness) {
        case Sidedness::one_sided: j["sidedness"] = "one-sided"; break;
        case Sidedness::two_sided_absolute: j["sidedness"] = "two-sided-absolute"; break;
        case Sidedness::two_sided_split: j["sidedness"] = "two-sided-split"; break;
    }
    j["passes"] = nlohmann::json::array();
    for (const PassInfo& p : report.passes) {
        nlohmann::json pj;
        pj["direction"] = p.direction;
        pj["z"] = p.z_used;
        pj["extent_threshold"] = p.extent_used;
        if (p.reduced_extent)
            pj["reduced_extent_threshold"] = *p.reduced_extent;
        else
            pj["reduced_extent_threshold"] = nullptr;
        pj["exhausted_permutations"] = p.exhausted_perms;
        j["passes"].push_back(pj);
    }
    j["clusters"] = nlohmann::json::array();
    for (const ClusterRow& c : report.clusters) {
        nlohmann::json cj;
        cj["id"] = c.id;
        cj["size"] = c.size;
        cj["tdp_lb"] = rat_double(c.tdp_lb);
        cj["tdp"] = c.tdp_heur ? nlohmann::json(rat_double(*c.tdp_heur)) : nlohmann::json(nullptr);
        cj["tdp_upper"] = c.tdp_upper ? nlohmann::json(rat_double(*c.tdp_upper)) : nlohmann::json(nullptr);
        cj["certified"] = c.certified;
        cj["z_max"] = c.z_max;
        cj["direction"] = c.direction;
        std::vector<std::int32_t> peak;
        for (int i = 0; i < report.dim; ++i) peak.push_back(c.peak[i]);
        cj["peak"] = peak;
        cj["regions"] = nlohmann::json::array();
        for (const RegionRow& rr : c.regions) cj["regions"].push_back(region_json(rr));
        j["clusters"].push_back(cj);
    }
    nlohmann::json tj;
    tj["size"] = report.totals.size;
    tj["tdp_lb"] = rat_double(report.totals.tdp_lb);
    tj["tdp"] = report.totals.tdp_heur ? nlohmann::json(rat_double(*report.totals.tdp_heur)) : nlohmann::json(nullptr);
    tj["regions"] = nlohmann::json::array();
    for (const RegionRow& rr : report.totals.regions) tj["regions"].push_back(region_json(rr));
    j["total"] = tj;
    j["queried_regions"] = nlohmann::json::array();
    for (const RegionRow& rr : report.queried) j["queried_regions"].push_back(region_json(rr));
    return j.dump(2) + "\n";
}

}  // namespace voxtdp
