# Experiment harness modules
