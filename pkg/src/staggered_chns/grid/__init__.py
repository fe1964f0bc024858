# Grid package: MAC staggered-grid geometry and the Fields state container.
