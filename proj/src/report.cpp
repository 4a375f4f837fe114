#include "reflow/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "reflow/error.hpp"

namespace reflow {

std::string format_num(double v) {
    if (std::isnan(v)) return "na";
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string csv_header() {
    return "family,n,k,lambda,R_lambda,metric_scaling,sec_mean,sec_dev,"
           "normal_comm,lagrangian,curved_flat,flat_metric,asym_ratio,"
           "regularity";
}

std::string csv_row(const GeometryRow& r) {
    std::string out = r.family;
    out += ',' + std::to_string(r.n);
    out += ',' + std::to_string(r.k);
    for (double v : {r.lambda, r.r_lambda, r.metric_scaling, r.sec_mean,
                     r.sec_dev, r.normal_comm, r.lagrangian, r.curved_flat,
                     r.flat_metric, r.asym_ratio, r.regularity})
        out += ',' + format_num(v);
    return out;
}

std::string csv_table(const std::vector<GeometryRow>& rows) {
    std::string out = csv_header();
    out += '\n';
    for (const auto& r : rows) {
        out += csv_row(r);
        out += '\n';
    }
    return out;
}

std::string json_table(const std::vector<GeometryRow>& rows) {
    using json = nlohmann::ordered_json;
    json root;
    root["rows"] = json::array();
    for (const auto& r : rows) {
        json row;
        row["family"] = r.family;
        row["n"] = r.n;
        row["k"] = r.k;
        // numbers go through the same decimal formatter as the CSV so the two
        // artifacts can never disagree
        row["lambda"] = format_num(r.lambda);
        row["R_lambda"] = format_num(r.r_lambda);
        row["metric_scaling"] = format_num(r.metric_scaling);
        row["sec_mean"] = format_num(r.sec_mean);
        row["sec_dev"] = format_num(r.sec_dev);
        row["normal_comm"] = format_num(r.normal_comm);
        row["lagrangian"] = format_num(r.lagrangian);
        row["curved_flat"] = format_num(r.curved_flat);
        row["flat_metric"] = format_num(r.flat_metric);
        row["asym_ratio"] = format_num(r.asym_ratio);
        row["regularity"] = format_num(r.regularity);
        root["rows"].push_back(row);
    }
    return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path);
    os << content;
    if (!os) throw IoError("write failed: " + path);
}

} // namespace reflow
