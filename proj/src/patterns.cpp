#include "gbsval/patterns.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace gbsval {

CountPatternSet ingest_patterns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open pattern file " + path);

    std::vector<std::int32_t> flat;
    int width = -1;
    std::int64_t rows = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') continue; // header / comments carry no binding data
        std::istringstream iss(line);
        std::vector<std::int32_t> row;
        std::string tok;
        while (iss >> tok) {
            std::size_t pos = 0;
            long v = 0;
            try {
                v = std::stol(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size())
                throw IngestError(path + ":" + std::to_string(lineno) +
                                  ": non-integer token '" + tok + "'");
            if (v < 0)
                throw IngestError(path + ":" + std::to_string(lineno) +
                                  ": negative count " + std::to_string(v));
            row.push_back(static_cast<std::int32_t>(v));
        }
        if (row.empty()) continue;
        if (width < 0) width = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != width)
            throw IngestError(path + ":" + std::to_string(lineno) + ": ragged row, expected " +
                              std::to_string(width) + " entries, got " +
                              std::to_string(row.size()));
        flat.insert(flat.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw IngestError(path + ": no patterns found");

    CountPatternSet set;
    set.patterns.resize(rows, width);
    for (std::int64_t i = 0; i < rows; ++i)
        for (int j = 0; j < width; ++j)
            set.patterns(i, j) = flat[static_cast<std::size_t>(i) * width + j];
    set.provenance = path;
    return set;
}

void save_patterns(const CountPatternSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pattern file " + path);
    out << "# M=" << set.modes() << " N_E=" << set.size() << "\n";
    for (std::int64_t i = 0; i < set.size(); ++i) {
        for (int j = 0; j < set.modes(); ++j) {
            if (j) out << ' ';
            out << set.patterns(i, j);
        }
        out << "\n";
    }
}

} // namespace gbsval
