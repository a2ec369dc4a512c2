from spavs.simulator import SimulationConfig, generate_dataset
from spavs.selection import PenaltyConfig, select_variables, plot_selection

cfg = SimulationConfig(n=12, a=25, kappa2=1, B=(3, 5, 4, 6, 0, 0), seed=1)
sample = generate_dataset(cfg)

res = select_variables(sample, PenaltyConfig(gamma=0.25, beta=0.25))
plot_selection(res)
