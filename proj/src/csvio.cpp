#include "robcred/csvio.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "robcred/config.hpp"

namespace robcred {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

std::vector<GroupSample> read_claims_csv(std::istream& in,
                                         const std::string& group_col,
                                         const std::string& loss_col) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV: missing header row");
    const auto header = split_row(strip_cr(line));
    std::size_t gi = header.size(), li = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == group_col) gi = i;
        if (header[i] == loss_col) li = i;
    }
    if (gi == header.size())
        throw DataError("column '" + group_col + "' not found in CSV header", 1);
    if (li == header.size())
        throw DataError("column '" + loss_col + "' not found in CSV header", 1);

    std::vector<GroupSample> groups;
    std::map<std::string, std::size_t> index;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto row = split_row(line);
        if (row.size() != header.size())
            throw DataError("expected " + std::to_string(header.size()) +
                                " fields, got " + std::to_string(row.size()),
                            lineno);
        const std::string& group = row[gi];
        if (group.empty()) throw DataError("empty group label", lineno);
        double loss = 0.0;
        try {
            std::size_t pos = 0;
            loss = std::stod(row[li], &pos);
            if (pos != row[li].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError("non-numeric loss '" + row[li] + "'", lineno);
        }
        if (!(loss > 0.0)) throw DataError("loss must be positive", lineno);

        auto [it, inserted] = index.emplace(group, groups.size());
        if (inserted) {
            groups.push_back(GroupSample{group, {}});
        }
        groups[it->second].losses.push_back(loss);
    }
    if (groups.empty()) throw DataError("CSV contains no data rows");
    return groups;
}

std::vector<GroupSample> read_claims_csv_file(const std::string& path,
                                              const std::string& group_col,
                                              const std::string& loss_col) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file '" + path + "'");
    return read_claims_csv(in, group_col, loss_col);
}

}  // namespace robcred
