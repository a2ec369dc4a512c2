from spavs.simulator import SimulationConfig, generate_dataset, plot_field

cfg = SimulationConfig(n=24, a=25, kappa2=1, seed=2024)
sample = generate_dataset(cfg)

plot_field(sample, 'x1')
# plot_field(sample, 'y1')
