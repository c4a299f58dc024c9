"""Si:Bi donor spin spectroscopy near EPR cancellation resonances."""
