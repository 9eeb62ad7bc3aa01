from commgraph.cli import main

main()
