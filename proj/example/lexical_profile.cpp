// Lexical diversity of a plain-text stream, one message per line.
//
//   lexical_profile [window] < messages.txt

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "snc/snc.hpp"

int main(int argc, char** argv) {
    using namespace snc;
    const std::size_t window = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 500;

    SourceSlice slice;
    slice.source = "stdin";
    std::string line;
    for (std::int64_t i = 0; std::getline(std::cin, line); ++i) {
        Record r;
        r.source = "stdin";
        r.record_id = std::to_string(i);
        r.timestamp = from_epoch_seconds(i);
        r.text = line;
        slice.records.push_back(std::move(r));
    }

    auto s = lexical::lexical_score(slice, window);
    if (s.missing()) {
        std::fprintf(stderr, "no tokens\n");
        return 1;
    }
    std::printf("tokens   %zu\n", s.token_count);
    std::printf("mattr    %.6f (window %zu)\n", *s.mattr, s.window_size);
    std::printf("h_word   %.6f bits\n", *s.h_word);
    if (s.h_char3) std::printf("h_char3  %.6f bits\n", *s.h_char3);
}
