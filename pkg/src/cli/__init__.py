# Command-line interface modules
