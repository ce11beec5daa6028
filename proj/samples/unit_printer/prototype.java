class A {
    public String toString() {
        Printer.write("A");
    }
}
