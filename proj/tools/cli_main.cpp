// Command-line front end. Talks to the library exclusively through the C API
// so it doubles as a smoke test of that boundary.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include <noncross/capi.h>

namespace {

struct VerbOpts {
  std::string config_path;
  unsigned long long seed = 0;
  bool seed_set = false;
  std::string out_dir;
};

int run_verb(const std::string& name, const VerbOpts& opts) {
  ncx_experiment* exp = nullptr;
  ncx_status st = ncx_experiment_open(opts.config_path.c_str(), &exp);
  if (st != NCX_OK) {
    std::fprintf(stderr, "noncross %s: %s error: %s\n", name.c_str(), ncx_status_name(st), ncx_last_error());
    return 1;
  }
  if (opts.seed_set) ncx_set_seed(exp, opts.seed);
  if (!opts.out_dir.empty()) ncx_set_out_dir(exp, opts.out_dir.c_str());

  char hash[17] = {0};
  ncx_config_hash(exp, hash, sizeof hash);

  if (name == "train") st = ncx_run_train(exp);
  else if (name == "sample") st = ncx_run_sample(exp);
  else if (name == "eval") st = ncx_run_eval(exp);
  else if (name == "sweep") st = ncx_run_sweep(exp);
  else if (name == "probe") st = ncx_run_probe(exp);
  else st = ncx_run_plot(exp);

  if (st != NCX_OK) {
    std::fprintf(stderr, "noncross %s [%s]: %s error: %s\n", name.c_str(), hash, ncx_status_name(st),
                 ncx_last_error());
    ncx_experiment_close(exp);
    return 1;
  }
  std::printf("noncross %s [%s]: done\n", name.c_str(), hash);
  ncx_experiment_close(exp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-conditioned diffusion laboratory"};
  app.require_subcommand(1);

  const struct {
    const char* name;
    const char* help;
  } verbs[] = {
      {"train", "Train the baseline and self-conditioned models, write checkpoints"},
      {"sample", "Sample trajectories from trained checkpoints, write samples.csv"},
      {"eval", "Sample and score every (method, step count) cell, write metrics"},
      {"sweep", "Full pipeline: train, sample, eval, plot"},
      {"probe", "Perturbation continuity probe on the trained conditioned model"},
      {"plot", "Render SVG plots from artifacts already in the output directory"},
  };

  VerbOpts opts[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(verbs[i].name, verbs[i].help);
    sub->add_option("--config", opts[i].config_path, "Path to a JSON experiment config")->required();
    sub->add_option("--seed", opts[i].seed, "Override the config's seed")->trigger_on_parse();
    sub->add_option("--out-dir", opts[i].out_dir, "Override the config's output directory");
    subs[i] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 6; ++i) {
    if (subs[i]->parsed()) {
      opts[i].seed_set = subs[i]->count("--seed") > 0;
      return run_verb(verbs[i].name, opts[i]);
    }
  }
  return 1;
}
