#pragma once

#include <string>

namespace ncx {

// Renders plots/*.svg from metrics.csv, samples.csv, and the trajectory JSON
// files under out_dir. All inputs are read and validated before the first
// output byte is written, so a failure leaves no partial files.
void export_plots(const std::string& out_dir);

}  // namespace ncx
