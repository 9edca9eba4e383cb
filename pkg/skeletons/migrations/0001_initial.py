# Generated by Django 5.2.10 on 2026-10-19 10:02

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SkeletonRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('completed_at', models.DateTimeField(blank=True, null=True)),
                ('command', models.CharField(choices=[('compute', 'Compute'), ('validate', 'Validate'), ('bench', 'Benchmark')], max_length=20)),
                ('input_path', models.CharField(blank=True, default='', max_length=500)),
                ('metric', models.CharField(max_length=50)),
                ('beta', models.FloatField(blank=True, null=True)),
                ('variant', models.CharField(blank=True, default='', max_length=10)),
                ('algorithm', models.CharField(blank=True, default='', max_length=20)),
                ('site_count', models.IntegerField(default=0)),
                ('edge_count', models.IntegerField(default=0)),
                ('violation_count', models.IntegerField(default=0)),
                ('status', models.CharField(choices=[('running', 'Running'), ('completed', 'Completed'), ('partial', 'Partial'), ('violations', 'Violations found'), ('failed', 'Failed')], default='running', max_length=20)),
                ('report', models.TextField(blank=True, default='')),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='BenchSample',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('n', models.IntegerField()),
                ('seconds', models.FloatField()),
                ('ratio', models.FloatField(blank=True, null=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='samples', to='skeletons.skeletonrun')),
            ],
            options={
                'ordering': ['run', 'n'],
            },
        ),
    ]
