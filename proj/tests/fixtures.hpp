#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mbtg/frontend.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const std::string& corpus_text() {
    static std::string text = read_file(std::string(MBTG_MODEL_DIR) + "/turn_indicator.mbt");
    return text;
}

/// The corpus model, parsed once per process.
inline const mbtg::Model& corpus() {
    static mbtg::Model m = mbtg::parse_model(corpus_text(), "turn_indicator.mbt");
    return m;
}

// A deliberately small two-machine model for relation / priority tests.
inline const char* kTinyModel = R"(model tiny {
  in  a : bool init 0
  in  b : int 0..3 init 0
  out y : bool init 0
  var c : int 0..3 init 0

  machine M {
    state S0 initial {
      on a / y := 1, c := b -> S1
    }
    state S1 {
      on !a / y := 0 -> S0
      on a && b == 3 / c := min(c + 1, 3) -> S1
    }
  }

  req R-1 "y rises" constraint F (y == 1)
}
)";

inline const mbtg::Model& tiny() {
    static mbtg::Model m = mbtg::parse_model(kTinyModel, "tiny.mbt");
    return m;
}

}  // namespace fixtures
